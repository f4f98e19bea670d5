#pragma once

#include "sdpr/dual_solver.hpp"
#include "sdpr/linalg.hpp"
#include "sdpr/problem.hpp"
#include "sdpr/spectral.hpp"

#include <optional>
#include <string>

namespace sdpr {

// A_V(S) = A(V S V') and its adjoint, for an orthonormal n x r basis V.
class CompressedOperators {
 public:
  CompressedOperators(const SdpProblem& problem, Eigenbasis basis);

  Eigen::Index r() const { return basis_.V.cols(); }
  const Eigenbasis& basis() const { return basis_; }
  const Matrix& V() const { return basis_.V; }
  const SdpProblem& problem() const { return *problem_; }

  // r calls to forward_rank1 on the eigenvectors of S.
  Vector forward(const Matrix& S) const;
  // V' (A'y) V, symmetrized.
  Matrix adjoint(const Vector& y) const;

  const Matrix& C_V() const { return c_v_; }
  double op_norm() const { return op_norm_; }
  // Smallest singular value of A_V on Sym^r. Zero when r(r+1)/2 > m; NaN
  // when r is too large for the dense Gram matrix.
  double sigma_min() const { return sigma_min_; }
  bool structurally_singular() const { return structurally_singular_; }

  // r(r+1)/2 above this uses power iteration for the norm and leaves
  // sigma_min unavailable.
  static constexpr Eigen::Index kMaxDenseGram = 820;

 private:
  const SdpProblem* problem_;
  Eigenbasis basis_;
  Matrix c_v_;
  double op_norm_ = 0.0;
  double sigma_min_ = 0.0;
  bool structurally_singular_ = false;
};

CompressedOperators compress(const SdpProblem& problem, Eigenbasis basis);

enum class RecoveryKind { MinFeas, MinObj };

struct CompressedSolution {
  Eigenbasis basis;
  Matrix S;
  RecoveryKind which = RecoveryKind::MinFeas;
  double residual = 0.0;   // ||A_V(S) - b||
  double objective = 0.0;  // tr(C_V S)
  double delta = 0.0;      // ball radius, MinObj only
  int iterations = 0;
  bool converged = false;
};

struct ApgConfig {
  int max_iters = 20000;
  double tol = 1e-9;  // gradient-mapping norm, relative to 1 + ||A_V'(b)||
  int restart = 100;
  // When positive, also stop at the first iterate with residual at most this.
  double target_residual = 0.0;
};

struct CpConfig {
  int max_iters = 50000;
  double tau = 0.0;    // 0 selects 0.99 / ||A_V||
  double sigma = 0.0;  // 0 selects 0.99 / ||A_V||
  double theta = 1.0;
  double tol = 1e-9;
};

struct RecoveryConfig {
  Eigen::Index r = 1;
  double gamma = 1.1;
  ApgConfig apg;
  CpConfig cp;

  void validate() const;
};

// Largest r with r(r+1)/2 <= m, capped by n - 1 and by `budget`.
Eigen::Index default_rank(Eigen::Index n, Eigen::Index m, Eigen::Index budget);

// Starts from `start` (projected onto the psd cone) when given, else from 0.
CompressedSolution solve_minfeas(const CompressedOperators& ops, const Vector& b,
                                 const ApgConfig& cfg, const Matrix* start = nullptr);

// Throws std::invalid_argument when the anchor (a MinFeas solution, computed
// here if not supplied) violates the delta ball.
//
// The dual iterate starts at `dual_start` when given, else at zero. Passing
// -y for the dual vector y that produced V is a good start, since
// C_V - A_V'(y) = V'Z(y)V is then already nearly psd and nearly zero.
CompressedSolution solve_minobj(const CompressedOperators& ops, const Vector& b, double delta,
                                const CpConfig& cfg,
                                const CompressedSolution* anchor = nullptr,
                                const Vector* dual_start = nullptr);

struct RecoveryOutcome {
  CompressedOperators ops;
  CompressedSolution minfeas;
  std::optional<CompressedSolution> minobj;

  const CompressedSolution& final_solution() const { return minobj ? *minobj : minfeas; }
};

// Primal recovery from a (possibly infeasible) dual vector y. Option 1
// returns MinFeas; option 2 also solves MinObj with delta = gamma times the
// MinFeas residual.
RecoveryOutcome recover(const SdpProblem& problem, const Vector& y, int option,
                        const RecoveryConfig& cfg, const EigensolverConfig& eig_cfg,
                        const Vector* warm_start = nullptr);

// V S V' as a dense matrix, for small-n diagnostics and tests.
Matrix dense_primal(const CompressedSolution& sol);

// Writes V.txt and S.txt into `dir` in the plain-text dense format.
void write_factors(const std::string& dir, const CompressedSolution& sol,
                   const std::string& suffix = "");

struct AlphaSearchResult {
  double alpha = 0.0;
  DualResult dual;
  std::optional<RecoveryOutcome> recovery;
  int solves = 0;
};

// Sequential search over alpha in {2, 4, ..., 2^d}. Stops at the first alpha
// whose recovered primal is no more feasible than the previous one, and
// returns the best.
AlphaSearchResult alpha_doubling_search(const SdpProblem& problem, const StepSchedule& schedule,
                                        const EigensolverConfig& eig_cfg,
                                        const StopCriteria& stop, const RecoveryConfig& rec_cfg,
                                        int option, int max_exponent);

}  // namespace sdpr
