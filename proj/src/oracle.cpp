#include "sdpr/oracle.hpp"

#include "sdpr/errors.hpp"

#include <cmath>
#include <string>

namespace sdpr {

DenseSolution solve_dense(const SdpProblem& problem, const OracleConfig& cfg) {
  const Eigen::Index n = problem.n();
  const Eigen::Index m = problem.m();
  if (n > cfg.max_n) {
    throw SizeLimitError("dense oracle is limited to n <= " + std::to_string(cfg.max_n) +
                         " (got n = " + std::to_string(n) + ")");
  }
  const Eigen::Index d = sym_dim(n);

  // Rows of A are svec(A_i), so A(X) = A svec(X) and A'y = smat(A' y).
  const std::vector<Matrix> mats = dense_constraints(problem);
  Matrix A(m, d);
  for (Eigen::Index i = 0; i < m; ++i) A.row(i) = svec(mats[static_cast<std::size_t>(i)]);
  const Matrix C = dense_cost(problem);
  const Vector c = svec(C);
  const Vector& b = problem.b;

  Eigen::LLT<Matrix> gram(A * A.transpose());
  if (gram.info() != Eigen::Success) {
    throw SolverError("constraint matrices are linearly dependent");
  }
  const Vector gram_diag = (A * A.transpose()).diagonal();
  if (gram.matrixLLT().diagonal().minCoeff() <= 1e-10 * std::sqrt(gram_diag.maxCoeff())) {
    throw SolverError("constraint matrices are numerically dependent");
  }

  const double bnorm = b.norm();
  const double cnorm = c.norm();
  Vector x = Vector::Zero(d);
  Vector s = Vector::Zero(d);
  Vector y = Vector::Zero(m);
  double mu = cfg.mu0;

  DenseSolution out;
  int it = 0;
  for (it = 1; it <= cfg.max_iters; ++it) {
    y = gram.solve(mu * (b - A * x) - A * (s - c));
    const Vector aty = A.transpose() * y;
    const Vector v = c - aty - mu * x;
    Eigen::SelfAdjointEigenSolver<Matrix> es(smat(v, n));
    const Vector lam = es.eigenvalues();
    const Matrix& Q = es.eigenvectors();
    s = svec(Q * lam.cwiseMax(0.0).asDiagonal() * Q.transpose());
    x = (s - v) / mu;

    const double pinf = (A * x - b).norm() / (1.0 + bnorm);
    const double dinf = (aty + s - c).norm() / (1.0 + cnorm);
    const double pobj = c.dot(x);
    const double dobj = b.dot(y);
    const double gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
    if (!std::isfinite(pinf) || !std::isfinite(dinf) || x.norm() > 1e14 || y.norm() > 1e14) {
      throw SolverError("dense oracle iterates diverged; the problem may be infeasible or "
                        "unbounded");
    }
    if (pinf <= cfg.tol && dinf <= cfg.tol && gap <= cfg.tol) break;
    if (it % 50 == 0) {
      if (dinf > 5.0 * pinf) {
        mu = std::max(mu / 2.0, 1e-8);
      } else if (pinf > 5.0 * dinf) {
        mu = std::min(mu * 2.0, 1e8);
      }
    }
  }

  out.iterations = std::min(it, cfg.max_iters);
  out.X = smat(x, n);
  out.y = y;
  out.Z = C - smat(A.transpose() * y, n);
  out.p_star = C.cwiseProduct(out.X).sum();
  out.d_star = b.dot(y);
  out.primal_residual = (A * x - b).norm();
  Eigen::SelfAdjointEigenSolver<Matrix> zs(out.Z, Eigen::EigenvaluesOnly);
  out.dual_residual = zs.eigenvalues()(0);
  out.gap = out.p_star - out.d_star;
  out.certified = out.primal_residual <= 1e-9 * (1.0 + bnorm) && out.dual_residual >= -1e-9 &&
                  std::abs(out.gap) <= 1e-8 * (1.0 + std::abs(out.p_star));
  return out;
}

SolutionRank enumerate_solution_rank(const DenseSolution& solution, double rel_tol) {
  SolutionRank out;
  out.rank = numerical_rank(solution.X, rel_tol);
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(solution.X));
  // Columns ordered by decreasing eigenvalue.
  out.V = es.eigenvectors().rightCols(out.rank).rowwise().reverse();
  return out;
}

}  // namespace sdpr
