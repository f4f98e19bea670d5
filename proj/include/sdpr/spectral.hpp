#pragma once

#include "sdpr/linalg.hpp"
#include "sdpr/operator.hpp"
#include "sdpr/problem.hpp"

#include <cstdint>
#include <optional>

namespace sdpr {

struct EigensolverConfig {
  double tol = 1e-8;
  // 0 selects min(n, max(4r + 20, 100)).
  int max_lanczos_dim = 0;
  int restarts = 50;
  std::uint64_t seed = 1;

  // Resolved Krylov dimension for an operator of size n and r wanted pairs.
  // Throws std::invalid_argument if the configuration is unusable.
  int lanczos_dim(Eigen::Index n, Eigen::Index r) const;
};

struct Eigenbasis {
  Matrix V;                // n x r, orthonormal columns
  Vector ritz_values;      // ascending
  Vector residual_norms;   // ||Z v_i - theta_i v_i||
  std::optional<double> threshold;  // (r+1)-th smallest Ritz value
  bool converged = false;
  bool clustered = false;  // theta_r and theta_{r+1} within 1e-10
  int matvecs = 0;
  int restarts = 0;
};

struct EigenPair {
  double value = 0.0;
  Vector vector;
  double residual = 0.0;
  bool converged = false;
  int matvecs = 0;
};

// Smallest eigenpair by thick-restart Lanczos. `warm_start`, when given and
// nonzero, replaces the random starting vector.
EigenPair min_eigpair(const SymmetricOperator& op, const EigensolverConfig& cfg,
                      const Vector* warm_start = nullptr);

// The r smallest eigenpairs, plus the (r+1)-th Ritz value as threshold.
// Requires 1 <= r < n.
Eigenbasis smallest_subspace(const SymmetricOperator& op, Eigen::Index r,
                             const EigensolverConfig& cfg, const Vector* warm_start = nullptr);

// Power iteration on A A' through gram_apply. The result is a lower bound on
// sigma_max(A) that does not decrease with `iters` for a fixed seed.
double operator_norm_Amap(const SdpProblem& problem, int iters, std::uint64_t seed = 3);

// Frobenius-nearest PSD matrix. Throws std::invalid_argument on non-finite
// input.
Matrix project_psd(const Matrix& S);

// Euclidean projection onto the ball of radius delta around the origin.
Vector project_ball(const Vector& v, double delta);

}  // namespace sdpr
