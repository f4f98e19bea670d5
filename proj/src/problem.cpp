#include "sdpr/problem.hpp"

#include "sdpr/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>

namespace sdpr {

// ---------------------------------------------------------------------------
// CostOracle

CostOracle CostOracle::sparse(SparseMatrix c) {
  if (c.rows() != c.cols() || c.rows() < 1) {
    throw std::invalid_argument("cost matrix must be square and nonempty");
  }
  CostOracle out(CostKind::SparseSymmetric, c.rows());
  out.mat_ = std::move(c);
  out.mat_.makeCompressed();
  return out;
}

CostOracle CostOracle::negated_laplacian(SparseMatrix weights) {
  if (weights.rows() != weights.cols() || weights.rows() < 1) {
    throw std::invalid_argument("weight matrix must be square and nonempty");
  }
  CostOracle out(CostKind::NegatedLaplacian, weights.rows());
  out.mat_ = std::move(weights);
  out.mat_.makeCompressed();
  out.degree_ = out.mat_ * Vector::Ones(out.n_);
  return out;
}

CostOracle CostOracle::identity(Eigen::Index n) {
  if (n < 1) throw std::invalid_argument("identity cost needs n >= 1");
  return CostOracle(CostKind::Identity, n);
}

void CostOracle::apply(const Vector& u, Vector& out) const {
  switch (kind_) {
    case CostKind::Identity:
      out = u;
      return;
    case CostKind::SparseSymmetric:
      out.noalias() = mat_ * u;
      return;
    case CostKind::NegatedLaplacian:
      out.noalias() = mat_ * u;
      out -= degree_.cwiseProduct(u);
      return;
  }
}

Vector CostOracle::apply(const Vector& u) const {
  Vector out(n_);
  apply(u, out);
  return out;
}

double CostOracle::frobenius_norm() const {
  switch (kind_) {
    case CostKind::Identity:
      return std::sqrt(static_cast<double>(n_));
    case CostKind::SparseSymmetric:
      return mat_.norm();
    case CostKind::NegatedLaplacian:
      return std::sqrt(mat_.squaredNorm() + degree_.squaredNorm());
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// ConstraintMap

Vector ConstraintMap::forward_rank1(const Vector& u, const Vector& v) const {
  Vector out = Vector::Zero(m());
  add_forward_rank1(1.0, u, v, out);
  return out;
}

Vector ConstraintMap::adjoint_apply(const Vector& y, const Vector& u) const {
  Vector out(n());
  adjoint_apply(y, u, out);
  return out;
}

DiagEqualityMap::DiagEqualityMap(Eigen::Index n) : n_(n) {
  if (n < 1) throw std::invalid_argument("diag-equality map needs n >= 1");
}

void DiagEqualityMap::add_forward_rank1(double scale, const Vector& u, const Vector& v,
                                        Vector& out) const {
  out.noalias() += scale * u.cwiseProduct(v);
}

void DiagEqualityMap::adjoint_apply(const Vector& y, const Vector& u, Vector& out) const {
  out = y.cwiseProduct(u);
}

EntryObservationMap::EntryObservationMap(Eigen::Index n1, Eigen::Index n2,
                                         std::vector<Entry> entries)
    : n1_(n1), n2_(n2), entries_(std::move(entries)) {
  if (n1 < 1 || n2 < 1) throw InputError("matrix completion needs n1, n2 >= 1");
  if (entries_.empty()) throw InputError("observation list is empty");
  std::set<std::pair<Eigen::Index, Eigen::Index>> seen;
  for (const Entry& e : entries_) {
    if (e.row < 0 || e.row >= n1 || e.col < 0 || e.col >= n2) {
      throw InputError("observation (" + std::to_string(e.row + 1) + "," +
                       std::to_string(e.col + 1) + ") out of range");
    }
    if (!seen.emplace(e.row, e.col).second) {
      throw InputError("duplicate observation (" + std::to_string(e.row + 1) + "," +
                       std::to_string(e.col + 1) + ")");
    }
  }
}

void EntryObservationMap::add_forward_rank1(double scale, const Vector& u, const Vector& v,
                                            Vector& out) const {
  const double half = 0.5 * scale;
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    const Eigen::Index a = entries_[k].row;
    const Eigen::Index b = n1_ + entries_[k].col;
    out(static_cast<Eigen::Index>(k)) += half * (u(a) * v(b) + u(b) * v(a));
  }
}

void EntryObservationMap::adjoint_apply(const Vector& y, const Vector& u, Vector& out) const {
  out.setZero(n());
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    const Eigen::Index a = entries_[k].row;
    const Eigen::Index b = n1_ + entries_[k].col;
    const double yk = 0.5 * y(static_cast<Eigen::Index>(k));
    out(a) += yk * u(b);
    out(b) += yk * u(a);
  }
}

GenericSparseMap::GenericSparseMap(Eigen::Index n, std::vector<SparseMatrix> mats,
                                   Validation validation)
    : n_(n), mats_(std::move(mats)) {
  if (n < 1) throw std::invalid_argument("generic map needs n >= 1");
  if (mats_.empty()) throw InputError("constraint list is empty");
  for (std::size_t i = 0; i < mats_.size(); ++i) {
    SparseMatrix& a = mats_[i];
    a.makeCompressed();
    if (validation == Validation::None) continue;
    if (a.rows() != n || a.cols() != n) {
      throw InputError("constraint " + std::to_string(i + 1) + " has wrong size");
    }
    const SparseMatrix diff = SparseMatrix(a.transpose()) - a;
    if (diff.norm() > 1e-12 * std::max(1.0, a.norm())) {
      throw InputError("constraint " + std::to_string(i + 1) + " is not symmetric");
    }
  }
}

void GenericSparseMap::add_forward_rank1(double scale, const Vector& u, const Vector& v,
                                         Vector& out) const {
  for (std::size_t i = 0; i < mats_.size(); ++i) {
    const SparseMatrix& a = mats_[i];
    double uav = 0.0;
    double vau = 0.0;
    for (Eigen::Index col = 0; col < a.outerSize(); ++col) {
      for (SparseMatrix::InnerIterator it(a, col); it; ++it) {
        uav += u(it.row()) * it.value() * v(col);
        vau += v(it.row()) * it.value() * u(col);
      }
    }
    out(static_cast<Eigen::Index>(i)) += scale * 0.5 * (uav + vau);
  }
}

void GenericSparseMap::adjoint_apply(const Vector& y, const Vector& u, Vector& out) const {
  out.setZero(n_);
  for (std::size_t i = 0; i < mats_.size(); ++i) {
    const double yi = y(static_cast<Eigen::Index>(i));
    if (yi != 0.0) out.noalias() += yi * (mats_[i] * u);
  }
}

Vector GenericSparseMap::gram_apply(const Vector& y) const {
  if (n_ > kMaxGramDim) {
    throw SizeLimitError("generic-sparse gram_apply is limited to n <= " +
                         std::to_string(kMaxGramDim));
  }
  SparseMatrix sum(n_, n_);
  for (std::size_t i = 0; i < mats_.size(); ++i) {
    sum += y(static_cast<Eigen::Index>(i)) * mats_[i];
  }
  Vector out(m());
  for (std::size_t i = 0; i < mats_.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = mats_[i].cwiseProduct(sum).sum();
  }
  return out;
}

// ---------------------------------------------------------------------------
// SdpProblem and the slack operator

SdpProblem::SdpProblem(CostOracle cost_in, std::shared_ptr<const ConstraintMap> constraints_in,
                       Vector b_in, std::optional<double> hint)
    : cost(std::move(cost_in)),
      constraints(std::move(constraints_in)),
      b(std::move(b_in)),
      trace_hint(hint) {
  if (!constraints) throw std::invalid_argument("constraint map is null");
  if (constraints->n() != cost.n()) {
    throw std::invalid_argument("cost and constraint dimensions differ");
  }
  if (constraints->m() < 1) throw std::invalid_argument("need at least one constraint");
  if (b.size() != constraints->m()) {
    throw std::invalid_argument("length of b does not match the number of constraints");
  }
  if (trace_hint && !(*trace_hint >= 0.0)) {
    throw std::invalid_argument("trace hint must be nonnegative");
  }
}

SlackOperator::SlackOperator(const SdpProblem& problem, Vector y, double sign)
    : problem_(&problem), y_(std::move(y)), sign_(sign), scratch_(problem.n()) {
  if (y_.size() != problem.m()) throw std::invalid_argument("y has wrong length");
  if (sign != 1.0 && sign != -1.0) throw std::invalid_argument("sign must be +1 or -1");
}

void SlackOperator::apply(const Vector& u, Vector& out) const {
  problem_->cost.apply(u, out);
  problem_->constraints->adjoint_apply(y_, u, scratch_);
  out -= scratch_;
  if (sign_ < 0.0) out = -out;
}

// ---------------------------------------------------------------------------
// Builders

SdpProblem build_maxcut(Eigen::Index n, const std::vector<WeightedEdge>& edges) {
  if (n < 2) throw InputError("Max-Cut needs at least 2 vertices");
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(2 * edges.size());
  for (const WeightedEdge& e : edges) {
    if (e.i < 0 || e.i >= n || e.j < 0 || e.j >= n) {
      throw InputError("edge (" + std::to_string(e.i + 1) + "," + std::to_string(e.j + 1) +
                       ") has a vertex out of range 1.." + std::to_string(n));
    }
    if (e.i == e.j) throw InputError("self-loop at vertex " + std::to_string(e.i + 1));
    if (!(e.w >= 0.0) || !std::isfinite(e.w)) {
      throw InputError("edge weight must be finite and nonnegative");
    }
    trips.emplace_back(e.i, e.j, e.w);
    trips.emplace_back(e.j, e.i, e.w);
  }
  SparseMatrix w(n, n);
  w.setFromTriplets(trips.begin(), trips.end());
  return SdpProblem(CostOracle::negated_laplacian(std::move(w)),
                    std::make_shared<DiagEqualityMap>(n), Vector::Ones(n),
                    static_cast<double>(n));
}

SdpProblem build_matrix_completion(Eigen::Index n1, Eigen::Index n2,
                                   const std::vector<Observation>& observations) {
  std::vector<EntryObservationMap::Entry> entries;
  entries.reserve(observations.size());
  Vector b(static_cast<Eigen::Index>(observations.size()));
  for (std::size_t k = 0; k < observations.size(); ++k) {
    entries.push_back({observations[k].i, observations[k].j});
    if (!std::isfinite(observations[k].value)) throw InputError("observation is not finite");
    b(static_cast<Eigen::Index>(k)) = observations[k].value;
  }
  auto map = std::make_shared<EntryObservationMap>(n1, n2, std::move(entries));
  return SdpProblem(CostOracle::identity(n1 + n2), std::move(map), std::move(b));
}

std::vector<WeightedEdge> random_graph(Eigen::Index n, double edge_prob, std::uint64_t seed) {
  Rng rng(seed);
  std::bernoulli_distribution coin(edge_prob);
  std::vector<WeightedEdge> edges;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (coin(rng)) edges.push_back({i, j, 1.0});
    }
  }
  return edges;
}

Eigen::Index default_observation_count(Eigen::Index n1, Eigen::Index n2) {
  const double s = static_cast<double>(n1 + n2);
  const auto want = static_cast<Eigen::Index>(std::floor(25.0 * s * std::log(s)));
  return std::min(want, n1 * n2);
}

namespace {

Matrix random_signs(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::bernoulli_distribution coin(0.5);
  Matrix out(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) out(i, j) = coin(rng) ? 1.0 : -1.0;
  }
  return out;
}

}  // namespace

SyntheticCompletion synthetic_matrix_completion(Eigen::Index n1, Eigen::Index n2,
                                                Eigen::Index rank, Eigen::Index num_obs,
                                                std::uint64_t seed) {
  if (n1 < 1 || n2 < 1 || rank < 1) throw std::invalid_argument("bad synthetic dimensions");
  Rng rng(seed);
  Matrix left = random_signs(n1, rank, rng);
  Matrix right = random_signs(rank, n2, rng);

  // Floyd's sampling keeps memory proportional to the sample size.
  const Eigen::Index total = n1 * n2;
  const Eigen::Index k = std::clamp<Eigen::Index>(num_obs, 1, total);
  std::unordered_set<Eigen::Index> chosen;
  chosen.reserve(static_cast<std::size_t>(k));
  for (Eigen::Index j = total - k; j < total; ++j) {
    std::uniform_int_distribution<Eigen::Index> pick(0, j);
    const Eigen::Index t = pick(rng);
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  std::vector<Eigen::Index> flat(chosen.begin(), chosen.end());
  std::sort(flat.begin(), flat.end());

  std::vector<Observation> obs;
  obs.reserve(flat.size());
  for (Eigen::Index idx : flat) {
    const Eigen::Index i = idx / n2;
    const Eigen::Index j = idx % n2;
    obs.push_back({i, j, left.row(i).dot(right.col(j))});
  }

  Eigen::HouseholderQR<Matrix> ql(left);
  Eigen::HouseholderQR<Matrix> qr(right.transpose());
  const Eigen::Index kl = std::min(n1, rank);
  const Eigen::Index kr = std::min(n2, rank);
  const Matrix rl = ql.matrixQR().topRows(kl).triangularView<Eigen::Upper>();
  const Matrix rr = qr.matrixQR().topRows(kr).triangularView<Eigen::Upper>();
  Eigen::JacobiSVD<Matrix> svd(rl * rr.transpose());
  const double nuclear = svd.singularValues().sum();

  SdpProblem problem = build_matrix_completion(n1, n2, obs);
  return SyntheticCompletion{std::move(problem), std::move(left), std::move(right), nuclear};
}

// ---------------------------------------------------------------------------
// Consistency probes

AdjointReport adjoint_consistency_check(const SdpProblem& problem, int probes,
                                        std::uint64_t seed, double tol) {
  if (probes < 1) throw std::invalid_argument("probes must be >= 1");
  const Eigen::Index n = problem.n();
  const Eigen::Index m = problem.m();
  const ConstraintMap& a = *problem.constraints;
  Rng rng(seed);
  AdjointReport rep;
  rep.probes = probes;
  for (int p = 0; p < probes; ++p) {
    const Vector u = random_unit(n, rng);
    const Vector v = random_unit(n, rng);
    const Vector y = random_normal(m, rng);

    const Vector fwd = a.forward_rank1(u, v);
    const Vector aty_v = a.adjoint_apply(y, v);
    const double lhs = fwd.dot(y);
    const double rhs = u.dot(aty_v);
    const double scale = std::max({1e-300, fwd.norm() * y.norm(), aty_v.norm()});
    rep.max_adjoint_violation = std::max(rep.max_adjoint_violation, std::abs(lhs - rhs) / scale);

    const Vector cu = problem.cost.apply(u);
    const Vector cv = problem.cost.apply(v);
    const double cscale = std::max({1e-300, cu.norm(), cv.norm()});
    rep.max_symmetry_violation =
        std::max(rep.max_symmetry_violation, std::abs(v.dot(cu) - u.dot(cv)) / cscale);

    std::normal_distribution<double> coef(0.0, 1.0);
    const double s = coef(rng);
    const double t = coef(rng);
    const Vector combo = problem.cost.apply(Vector(s * u + t * v));
    const Vector expect = s * cu + t * cv;
    const double lscale = std::max({1e-300, expect.norm(), combo.norm()});
    rep.max_linearity_violation =
        std::max(rep.max_linearity_violation, (combo - expect).norm() / lscale);
  }
  rep.passed = rep.max_adjoint_violation <= tol && rep.max_symmetry_violation <= tol &&
               rep.max_linearity_violation <= tol;
  return rep;
}

// ---------------------------------------------------------------------------
// Dense helpers

Matrix dense_cost(const SdpProblem& problem) {
  const Eigen::Index n = problem.n();
  Matrix c(n, n);
  Vector e = Vector::Zero(n);
  Vector col(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    e(j) = 1.0;
    problem.cost.apply(e, col);
    c.col(j) = col;
    e(j) = 0.0;
  }
  return symmetrize(c);
}

std::vector<Matrix> dense_constraints(const SdpProblem& problem) {
  const Eigen::Index n = problem.n();
  const Eigen::Index m = problem.m();
  std::vector<Matrix> mats(static_cast<std::size_t>(m), Matrix::Zero(n, n));
  Vector ea = Vector::Zero(n);
  Vector eb = Vector::Zero(n);
  for (Eigen::Index a = 0; a < n; ++a) {
    ea(a) = 1.0;
    for (Eigen::Index b = a; b < n; ++b) {
      eb(b) = 1.0;
      const Vector vals = problem.constraints->forward_rank1(ea, eb);
      for (Eigen::Index i = 0; i < m; ++i) {
        mats[static_cast<std::size_t>(i)](a, b) = vals(i);
        mats[static_cast<std::size_t>(i)](b, a) = vals(i);
      }
      eb(b) = 0.0;
    }
    ea(a) = 0.0;
  }
  return mats;
}

Matrix dense_adjoint(const SdpProblem& problem, const Vector& y) {
  const Eigen::Index n = problem.n();
  Matrix out(n, n);
  Vector e = Vector::Zero(n);
  Vector col(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    e(j) = 1.0;
    problem.constraints->adjoint_apply(y, e, col);
    out.col(j) = col;
    e(j) = 0.0;
  }
  return symmetrize(out);
}

Vector dense_forward(const SdpProblem& problem, const Matrix& X) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(X));
  Vector out = Vector::Zero(problem.m());
  const Matrix& q = es.eigenvectors();
  for (Eigen::Index k = 0; k < X.rows(); ++k) {
    const double lam = es.eigenvalues()(k);
    if (lam != 0.0) {
      const Vector qk = q.col(k);
      problem.constraints->add_forward_rank1(lam, qk, qk, out);
    }
  }
  return out;
}

}  // namespace sdpr
