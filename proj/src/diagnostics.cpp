#include "sdpr/diagnostics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace sdpr {

double dimacs_feasibility(double residual_norm, double b_norm) {
  return residual_norm / (b_norm + 1.0);
}

double dimacs_gap(double primal_objective, double g_alpha) {
  return std::abs(primal_objective + g_alpha) /
         (std::abs(primal_objective) + std::abs(g_alpha) + 1.0);
}

QualityReport quality(const SdpProblem& problem, const CompressedSolution& solution,
                      const Vector& y, double alpha, double lambda_min) {
  const Matrix& V = solution.basis.V;
  const Eigen::Index r = V.cols();
  if (solution.S.rows() != r || V.rows() != problem.n()) {
    throw std::invalid_argument("solution factors have inconsistent shapes");
  }
  Matrix cv(problem.n(), r);
  Vector col(problem.n());
  for (Eigen::Index j = 0; j < r; ++j) {
    problem.cost.apply(V.col(j), col);
    cv.col(j) = col;
  }
  const Matrix c_v = symmetrize(V.transpose() * cv);

  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(solution.S));
  Vector ax = Vector::Zero(problem.m());
  Vector u(problem.n());
  for (Eigen::Index k = 0; k < r; ++k) {
    const double lam = es.eigenvalues()(k);
    if (lam == 0.0) continue;
    u.noalias() = V * es.eigenvectors().col(k);
    problem.constraints->add_forward_rank1(lam, u, u, ax);
  }

  QualityReport q;
  q.primal_objective = c_v.cwiseProduct(solution.S).sum();
  q.dual_infeas = std::max(-lambda_min, 0.0);
  q.g_alpha = -problem.b.dot(y) + alpha * q.dual_infeas;
  q.primal_subopt_bound = q.primal_objective + q.g_alpha;
  q.primal_infeas = (ax - problem.b).norm();
  q.dimacs_feas = dimacs_feasibility(q.primal_infeas, problem.b.norm());
  q.dimacs_gap = dimacs_gap(q.primal_objective, q.g_alpha);
  return q;
}

SigmaMin sigma_min_AV(const CompressedOperators& ops) {
  return {ops.sigma_min(), ops.structurally_singular()};
}

ConditioningReport conditioning(const CompressedOperators& ops, double sigma_max_A) {
  ConditioningReport c;
  c.T = ops.basis().threshold.value_or(std::numeric_limits<double>::quiet_NaN());
  c.sigma_min_AV = ops.sigma_min();
  c.sigma_max_A = sigma_max_A;
  c.clustered = ops.basis().clustered;
  if (c.sigma_min_AV > 0.0) {
    c.kappa_V = sigma_max_A / c.sigma_min_AV;
  } else {
    c.kappa_V = std::numeric_limits<double>::infinity();
    c.kappa_infinite = true;
  }
  return c;
}

std::optional<double> bound_B(double eps, double T, double kappa_V, double S_op, double delta_S,
                              double sigma_min_AV) {
  if (!(T > 0.0) || !(sigma_min_AV > 0.0) || !std::isfinite(kappa_V)) return std::nullopt;
  const double e = std::max(eps, 0.0) / T;
  // With u = sqrt(||X*||): u^2 - a u - c <= 0.
  const double a = std::sqrt(2.0) * (1.0 + kappa_V) * std::sqrt(e);
  const double c = S_op + (1.0 + kappa_V) * e + delta_S / sigma_min_AV;
  const double u = 0.5 * (a + std::sqrt(a * a + 4.0 * c));
  return u * u;
}

DistanceBound distance_bound_minfeas(double eps, double T, double kappa_V,
                                     std::optional<double> B, double S_op, double delta_S,
                                     double sigma_min_AV) {
  DistanceBound out;
  if (!(T > 0.0) || !(sigma_min_AV > 0.0) || !std::isfinite(kappa_V)) {
    out.ill_posed = true;
    return out;
  }
  if (!B) B = bound_B(eps, T, kappa_V, S_op, delta_S, sigma_min_AV);
  if (!B || !(*B > 0.0)) {
    out.ill_posed = true;
    return out;
  }
  out.B = *B;
  const double e = std::max(eps, 0.0) / T;
  out.value = (1.0 + kappa_V) * (e + std::sqrt(2.0 * e * out.B));
  return out;
}

MinObjParameters minobj_parameters(double eps, double T, double B, double sigma_max_A,
                                   Eigen::Index r, double C_fro, double C_op,
                                   DeltaConstant constant) {
  MinObjParameters p;
  if (!(T > 0.0)) {
    p.ill_posed = true;
    return p;
  }
  const double e = std::max(eps, 0.0) / T;
  const double root = std::sqrt(2.0 * e * B);
  const double coef = constant == DeltaConstant::Appendix ? 2.0 : 1.0;
  p.delta0 = sigma_max_A * (e + coef * root);
  p.eps0 = std::min(C_fro * (e + root),
                    C_op * (e + std::sqrt(2.0 * static_cast<double>(r) * e * B)));
  return p;
}

namespace {

Matrix dense_slack(const SdpProblem& problem, const Vector& y) {
  return dense_cost(problem) - dense_adjoint(problem, y);
}

// Columns of the eigenvector matrix whose eigenvalue magnitude is above
// (or, with `above` false, at most) rel_tol times the largest.
Matrix eigen_columns(const Matrix& S, double rel_tol, bool above) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(S));
  const Vector ev = es.eigenvalues();
  const double top = ev.cwiseAbs().maxCoeff();
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    const bool big = top > 0.0 && std::abs(ev(i)) > rel_tol * top;
    if (big == above) keep.push_back(i);
  }
  Matrix out(S.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    out.col(static_cast<Eigen::Index>(k)) = es.eigenvectors().col(keep[k]);
  }
  return out;
}

// Singular values of a dense matrix, padded with zeros when it has more
// columns than rows so the minimum reflects a nontrivial kernel.
Vector singular_values_padded(const Matrix& M) {
  Eigen::JacobiSVD<Matrix> svd(M);
  Vector s = svd.singularValues();
  if (M.cols() > M.rows()) {
    Vector padded = Vector::Zero(M.cols());
    padded.head(s.size()) = s;
    return padded;
  }
  return s;
}

}  // namespace

Matrix growth_operator(const SdpProblem& problem, const Matrix& U) {
  const Eigen::Index n = problem.n();
  const Eigen::Index m = problem.m();
  const Eigen::Index d = sym_dim(n);
  const Matrix P = U * U.transpose();
  const std::vector<Matrix> mats = dense_constraints(problem);
  Matrix D = Matrix::Zero(2 * d, d + m);
  for (Eigen::Index l = 0; l < d; ++l) {
    const Matrix E = sym_basis(n, l);
    D.col(l).head(d) = svec(E - P * E * P);
    D.col(l).tail(d) = svec(E);
  }
  for (Eigen::Index i = 0; i < m; ++i) {
    D.col(d + i).tail(d) = svec(mats[static_cast<std::size_t>(i)]);
  }
  return D;
}

RegularityReport regularity_probe(const SdpProblem& problem, const Matrix& X_star,
                                  const Vector& y_star, double rank_tol) {
  const Eigen::Index n = problem.n();
  if (n > 50) throw std::invalid_argument("regularity_probe is limited to n <= 50");
  const Matrix C = dense_cost(problem);
  const Matrix Z = dense_slack(problem, y_star);

  RegularityReport rep;
  rep.n = n;
  rep.strong_duality_gap = C.cwiseProduct(X_star).sum() - problem.b.dot(y_star);
  rep.complementarity_residual = (X_star * Z).norm();
  rep.rank_X = numerical_rank(X_star, rank_tol);
  rep.rank_Z = numerical_rank(Z, rank_tol);
  rep.rank_sum = rep.rank_X + rep.rank_Z;
  rep.strictly_complementary = rep.rank_sum == n;

  // Primal solutions live on the face {W S W' : S psd}, W = null(Z(y*)).
  const Matrix W = eigen_columns(Z, rank_tol, false);
  const Eigen::Index k = W.cols();
  if (k == 0) {
    rep.primal_unique = true;
  } else {
    const std::vector<Matrix> mats = dense_constraints(problem);
    const Eigen::Index dk = sym_dim(k);
    Matrix M(problem.m(), dk);
    for (Eigen::Index l = 0; l < dk; ++l) {
      const Matrix X = W * sym_basis(k, l) * W.transpose();
      for (Eigen::Index i = 0; i < problem.m(); ++i) {
        M(i, l) = mats[static_cast<std::size_t>(i)].cwiseProduct(X).sum();
      }
    }
    const Vector s = singular_values_padded(M);
    rep.sigma_min_primal_face = s.minCoeff();
    rep.primal_unique = rep.sigma_min_primal_face > rank_tol * std::max(1.0, s.maxCoeff());
  }

  const Matrix U = eigen_columns(Z, rank_tol, true);
  const Vector sd = singular_values_padded(growth_operator(problem, U));
  rep.sigma_min_D = sd.minCoeff();
  rep.dual_unique = rep.sigma_min_D > rank_tol * std::max(1.0, sd.maxCoeff());
  return rep;
}

GrowthReport quadratic_growth_check(const SdpProblem& problem, const Matrix& X_star,
                                    const Vector& y_star, const std::vector<Vector>& samples,
                                    double rank_tol, double feas_tol) {
  const Eigen::Index n = problem.n();
  if (n > 10) throw std::invalid_argument("quadratic_growth_check is limited to n <= 10");
  const Matrix Z_star = dense_slack(problem, y_star);
  const Matrix U = eigen_columns(Z_star, rank_tol, true);

  GrowthReport rep;
  rep.sigma_min_D = singular_values_padded(growth_operator(problem, U)).minCoeff();

  Eigen::SelfAdjointEigenSolver<Matrix> xs(symmetrize(X_star), Eigen::EigenvaluesOnly);
  const double xtop = xs.eigenvalues().cwiseAbs().maxCoeff();
  rep.lambda_min_pos_X = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double lam = xs.eigenvalues()(i);
    if (lam > rank_tol * xtop) rep.lambda_min_pos_X = std::min(rep.lambda_min_pos_X, lam);
  }
  const double d_star = problem.b.dot(y_star);

  for (const Vector& y : samples) {
    GrowthSample s;
    const Matrix Z = dense_slack(problem, y);
    Eigen::SelfAdjointEigenSolver<Matrix> zs(Z, Eigen::EigenvaluesOnly);
    if (zs.eigenvalues()(0) < -feas_tol) {
      s.skipped = true;
      ++rep.skipped;
      rep.samples.push_back(s);
      continue;
    }
    const double eps = std::max(d_star - problem.b.dot(y), 0.0);
    const double z_op = zs.eigenvalues().cwiseAbs().maxCoeff();
    s.lhs = std::sqrt((Z - Z_star).squaredNorm() + (y - y_star).squaredNorm());
    const double q = eps / rep.lambda_min_pos_X;
    s.rhs = (q + std::sqrt(2.0 * q * z_op)) / rep.sigma_min_D;
    s.holds = s.lhs <= s.rhs * (1.0 + 1e-9) + 1e-9;
    if (!s.holds) ++rep.violations;
    rep.samples.push_back(s);
  }
  return rep;
}

}  // namespace sdpr
