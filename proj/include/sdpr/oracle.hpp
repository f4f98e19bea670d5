#pragma once

#include "sdpr/linalg.hpp"
#include "sdpr/problem.hpp"

namespace sdpr {

struct OracleConfig {
  Eigen::Index max_n = 50;
  int max_iters = 100000;
  // Relative primal infeasibility, dual infeasibility and gap at which the
  // iteration stops.
  double tol = 1e-12;
  double mu0 = 1.0;
};

struct DenseSolution {
  Matrix X;
  Vector y;
  Matrix Z;  // C - A'y
  double p_star = 0.0;
  double d_star = 0.0;
  double primal_residual = 0.0;  // ||A(X) - b||
  double dual_residual = 0.0;    // lambda_min(Z)
  double gap = 0.0;              // p_star - d_star
  int iterations = 0;
  // True when the residual invariants below hold:
  //   primal_residual <= 1e-9 (1 + ||b||)
  //   dual_residual >= -1e-9
  //   |gap| <= 1e-8 (1 + |p_star|)
  bool certified = false;
};

// Dense alternating-direction augmented Lagrangian method on the dual, with
// a Cholesky factorization of the constraint Gram matrix. Throws
// SizeLimitError when n > cfg.max_n, and SolverError when the constraints
// are linearly dependent or the iterates blow up.
DenseSolution solve_dense(const SdpProblem& problem, const OracleConfig& cfg = {});

struct SolutionRank {
  int rank = 0;
  Matrix V;  // n x rank, top eigenvectors of X
};

SolutionRank enumerate_solution_rank(const DenseSolution& solution, double rel_tol = 1e-7);

}  // namespace sdpr
