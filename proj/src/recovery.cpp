#include "sdpr/recovery.hpp"

#include "sdpr/errors.hpp"
#include "sdpr/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace sdpr {

CompressedOperators::CompressedOperators(const SdpProblem& problem, Eigenbasis basis)
    : problem_(&problem), basis_(std::move(basis)) {
  const Matrix& V = basis_.V;
  const Eigen::Index r = V.cols();
  if (V.rows() != problem.n() || r < 1) {
    throw std::invalid_argument("basis has the wrong shape");
  }
  if ((V.transpose() * V - Matrix::Identity(r, r)).norm() > 1e-8) {
    throw std::invalid_argument("basis columns are not orthonormal");
  }

  Matrix cv(problem.n(), r);
  Vector col(problem.n());
  for (Eigen::Index j = 0; j < r; ++j) {
    problem.cost.apply(V.col(j), col);
    cv.col(j) = col;
  }
  c_v_ = symmetrize(V.transpose() * cv);

  const Eigen::Index d = sym_dim(r);
  structurally_singular_ = d > problem.m();
  if (d <= kMaxDenseGram) {
    Matrix gram(d, d);
    for (Eigen::Index l = 0; l < d; ++l) gram.col(l) = svec(adjoint(forward(sym_basis(r, l))));
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(gram), Eigen::EigenvaluesOnly);
    op_norm_ = std::sqrt(std::max(es.eigenvalues().maxCoeff(), 0.0));
    sigma_min_ = std::sqrt(std::max(es.eigenvalues().minCoeff(), 0.0));
  } else {
    Rng rng(11);
    Vector s = random_unit(d, rng);
    double best = 0.0;
    for (int it = 0; it < 200; ++it) {
      const Vector gs = svec(adjoint(forward(smat(s, r))));
      best = std::max(best, s.dot(gs));
      const double nrm = gs.norm();
      if (nrm == 0.0) break;
      s = gs / nrm;
    }
    op_norm_ = std::sqrt(best);
    sigma_min_ = std::numeric_limits<double>::quiet_NaN();
  }
  if (structurally_singular_) sigma_min_ = 0.0;
}

Vector CompressedOperators::forward(const Matrix& S) const {
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(S));
  Vector out = Vector::Zero(problem_->m());
  Vector u(problem_->n());
  for (Eigen::Index k = 0; k < S.rows(); ++k) {
    const double lam = es.eigenvalues()(k);
    if (lam == 0.0) continue;
    u.noalias() = basis_.V * es.eigenvectors().col(k);
    problem_->constraints->add_forward_rank1(lam, u, u, out);
  }
  return out;
}

Matrix CompressedOperators::adjoint(const Vector& y) const {
  const Matrix& V = basis_.V;
  Matrix w(V.rows(), V.cols());
  Vector col(V.rows());
  for (Eigen::Index j = 0; j < V.cols(); ++j) {
    problem_->constraints->adjoint_apply(y, V.col(j), col);
    w.col(j) = col;
  }
  return symmetrize(V.transpose() * w);
}

CompressedOperators compress(const SdpProblem& problem, Eigenbasis basis) {
  return CompressedOperators(problem, std::move(basis));
}

void RecoveryConfig::validate() const {
  if (r < 1) throw std::invalid_argument("rank must be >= 1");
  if (!(gamma >= 1.0)) throw std::invalid_argument("gamma must be >= 1");
  if (apg.max_iters < 1 || !(apg.tol > 0.0) || apg.restart < 1) {
    throw std::invalid_argument("bad accelerated gradient settings");
  }
  if (cp.max_iters < 1 || !(cp.tol > 0.0) || cp.tau < 0.0 || cp.sigma < 0.0 ||
      !(cp.theta >= 0.0 && cp.theta <= 1.0)) {
    throw std::invalid_argument("bad primal-dual settings");
  }
}

Eigen::Index default_rank(Eigen::Index n, Eigen::Index m, Eigen::Index budget) {
  Eigen::Index r = 1;
  while (sym_dim(r + 1) <= m) ++r;
  return std::max<Eigen::Index>(1, std::min({r, n - 1, budget}));
}

namespace {

double inner(const Matrix& a, const Matrix& b) { return a.cwiseProduct(b).sum(); }

void finish(const CompressedOperators& ops, const Vector& b, CompressedSolution& sol) {
  sol.basis = ops.basis();
  sol.residual = (ops.forward(sol.S) - b).norm();
  sol.objective = inner(ops.C_V(), sol.S);
}

}  // namespace

CompressedSolution solve_minfeas(const CompressedOperators& ops, const Vector& b,
                                 const ApgConfig& cfg, const Matrix* start) {
  const Eigen::Index r = ops.r();
  CompressedSolution sol;
  sol.which = RecoveryKind::MinFeas;
  sol.S = Matrix::Zero(r, r);
  if (start != nullptr) {
    if (start->rows() != r || start->cols() != r) {
      throw std::invalid_argument("MinFeas start has wrong shape");
    }
    sol.S = project_psd(symmetrize(*start));
  }

  const double lip = ops.op_norm() * ops.op_norm();
  if (lip == 0.0) {
    sol.converged = true;
    finish(ops, b, sol);
    return sol;
  }
  auto grad = [&](const Matrix& S) { return ops.adjoint(ops.forward(S) - b); };
  const double scale = 1.0 + ops.adjoint(b).norm();

  Matrix S = sol.S;
  Matrix Y = S;
  double t = 1.0;
  for (int it = 1; it <= cfg.max_iters; ++it) {
    const Matrix next = project_psd(Y - grad(Y) / lip);
    const Vector res_next = ops.forward(next) - b;
    const double mapping = lip * (next - project_psd(next - ops.adjoint(res_next) / lip)).norm();
    sol.iterations = it;
    if (mapping <= cfg.tol * scale ||
        (cfg.target_residual > 0.0 && res_next.norm() <= cfg.target_residual)) {
      S = next;
      sol.converged = true;
      break;
    }
    double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    if (it % cfg.restart == 0) {
      t_next = 1.0;
      Y = next;
    } else {
      Y = next + ((t - 1.0) / t_next) * (next - S);
    }
    S = next;
    t = t_next;
  }
  sol.S = S;
  finish(ops, b, sol);
  return sol;
}

CompressedSolution solve_minobj(const CompressedOperators& ops, const Vector& b, double delta,
                                const CpConfig& cfg, const CompressedSolution* anchor,
                                const Vector* dual_start) {
  if (!(delta >= 0.0)) throw std::invalid_argument("delta must be >= 0");
  CompressedSolution computed;
  if (anchor == nullptr) {
    computed = solve_minfeas(ops, b, ApgConfig{});
    anchor = &computed;
  }
  const double slack = 1e-12 * (1.0 + b.norm());
  if (anchor->residual > delta + slack) {
    throw std::invalid_argument("MinObj ball of radius " + std::to_string(delta) +
                                " excludes the MinFeas solution (residual " +
                                std::to_string(anchor->residual) + ")");
  }

  const Eigen::Index r = ops.r();
  const Matrix& cv = ops.C_V();
  CompressedSolution sol;
  sol.which = RecoveryKind::MinObj;
  sol.delta = delta;

  const double knorm = ops.op_norm();
  if (knorm == 0.0) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(cv, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < 0.0) {
      throw SolverError("MinObj is unbounded: A_V vanishes and C_V is indefinite");
    }
    sol.S = Matrix::Zero(r, r);
    sol.converged = true;
    finish(ops, b, sol);
    return sol;
  }
  const double tau = cfg.tau > 0.0 ? cfg.tau : 0.99 / knorm;
  const double sigma = cfg.sigma > 0.0 ? cfg.sigma : 0.99 / knorm;
  if (tau * sigma * knorm * knorm > 1.0 + 1e-12) {
    throw std::invalid_argument("step sizes violate tau * sigma * ||A_V||^2 <= 1");
  }

  Matrix S = anchor->S;
  Vector KS = ops.forward(S);
  Matrix Sbar = S;
  Vector KSbar = KS;
  Vector y = Vector::Zero(b.size());
  if (dual_start != nullptr) {
    if (dual_start->size() != b.size()) throw std::invalid_argument("dual start has wrong size");
    y = *dual_start;
  }
  Matrix ATy = ops.adjoint(y);
  const double pscale = 1.0 + cv.norm();
  const double dscale = 1.0 + b.norm();

  for (int it = 1; it <= cfg.max_iters; ++it) {
    const Vector shifted = KSbar - b;
    const Vector y_next = y + sigma * shifted - sigma * project_ball(y / sigma + shifted, delta);
    const Matrix ATy_next = ops.adjoint(y_next);
    const Matrix S_next = project_psd(S - tau * ATy_next - tau * cv);
    const Vector KS_next = ops.forward(S_next);

    const double pres = ((S - S_next) / tau - (ATy - ATy_next)).norm();
    const double dres = ((y - y_next) / sigma - (KS - KS_next)).norm();
    const double feas = (KS_next - b).norm();

    Sbar = S_next + cfg.theta * (S_next - S);
    KSbar = KS_next + cfg.theta * (KS_next - KS);
    S = S_next;
    KS = KS_next;
    y = y_next;
    ATy = ATy_next;
    sol.iterations = it;
    if (pres <= cfg.tol * pscale && dres <= cfg.tol * dscale && feas <= delta + cfg.tol) {
      sol.converged = true;
      break;
    }
  }

  // Pull the iterate back inside the ball along the segment to the anchor;
  // the residual is convex along the segment and within delta at the anchor.
  const Vector KA = ops.forward(anchor->S);
  auto pull_back = [&](const Matrix& P, const Vector& KP) {
    auto residual_at = [&](double w) { return (w * KP + (1.0 - w) * KA - b).norm(); };
    double w = 1.0;
    if (residual_at(1.0) > delta) {
      double lo = 0.0;
      double hi = 1.0;
      for (int i = 0; i < 100; ++i) {
        const double mid = 0.5 * (lo + hi);
        (residual_at(mid) <= delta ? lo : hi) = mid;
      }
      w = lo;
    }
    CompressedSolution c = sol;
    c.S = symmetrize(w * P + (1.0 - w) * anchor->S);
    finish(ops, b, c);
    return c;
  };
  CompressedSolution best = pull_back(S, KS);
  // A slowly converging iterate can sit well outside a thin ball, where the
  // segment to the anchor loses most of its progress. Projected gradient on
  // the residual started from it reaches the ball nearby.
  if ((KS - b).norm() > delta) {
    ApgConfig restore;
    restore.target_residual = delta;
    const Matrix R = solve_minfeas(ops, b, restore, &S).S;
    CompressedSolution alt = pull_back(R, ops.forward(R));
    if (alt.objective < best.objective) best = std::move(alt);
  }
  sol = std::move(best);
  if (sol.objective > anchor->objective) {
    sol.S = anchor->S;
    finish(ops, b, sol);
  }
  return sol;
}

RecoveryOutcome recover(const SdpProblem& problem, const Vector& y, int option,
                        const RecoveryConfig& cfg, const EigensolverConfig& eig_cfg,
                        const Vector* warm_start) {
  cfg.validate();
  if (option != 1 && option != 2) throw std::invalid_argument("recovery option must be 1 or 2");
  SlackOperator z(problem, y);
  Eigenbasis basis = smallest_subspace(z, cfg.r, eig_cfg, warm_start);
  RecoveryOutcome out{compress(problem, std::move(basis)), {}, std::nullopt};
  out.minfeas = solve_minfeas(out.ops, problem.b, cfg.apg);
  if (option == 2) {
    const double delta = cfg.gamma * out.minfeas.residual;
    const Vector dual_start = -y;
    out.minobj = solve_minobj(out.ops, problem.b, delta, cfg.cp, &out.minfeas, &dual_start);
  }
  return out;
}

Matrix dense_primal(const CompressedSolution& sol) {
  const Matrix& V = sol.basis.V;
  return symmetrize(V * sol.S * V.transpose());
}

void write_factors(const std::string& dir, const CompressedSolution& sol,
                   const std::string& suffix) {
  const std::string vpath = dir + "/V.txt" + suffix;
  const std::string spath = dir + "/S.txt" + suffix;
  std::ofstream vf(vpath);
  std::ofstream sf(spath);
  if (!vf || !sf) throw InputError("cannot write factor files in '" + dir + "'");
  io::write_dense(vf, sol.basis.V);
  io::write_dense(sf, sol.S);
}

AlphaSearchResult alpha_doubling_search(const SdpProblem& problem, const StepSchedule& schedule,
                                        const EigensolverConfig& eig_cfg,
                                        const StopCriteria& stop, const RecoveryConfig& rec_cfg,
                                        int option, int max_exponent) {
  if (max_exponent < 1) throw std::invalid_argument("doubling search needs max exponent >= 1");
  AlphaSearchResult best;
  double best_res = std::numeric_limits<double>::infinity();
  double prev_res = std::numeric_limits<double>::infinity();
  for (int d = 1; d <= max_exponent; ++d) {
    const double alpha = std::ldexp(1.0, d);
    DualResult dual = solve_dual(problem, alpha, schedule, eig_cfg, stop);
    RecoveryOutcome rec = recover(problem, dual.best.y, option, rec_cfg, eig_cfg, &dual.best.v);
    const double res = rec.final_solution().residual;
    ++best.solves;
    if (res < best_res) {
      best_res = res;
      best.alpha = alpha;
      best.dual = std::move(dual);
      best.recovery.emplace(std::move(rec));
    }
    if (d > 1 && res >= prev_res) break;
    prev_res = res;
  }
  return best;
}

}  // namespace sdpr
