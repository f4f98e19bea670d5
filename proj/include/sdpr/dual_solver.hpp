#pragma once

#include "sdpr/linalg.hpp"
#include "sdpr/problem.hpp"
#include "sdpr/spectral.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace sdpr {

enum class PenaltyRule { Explicit, TraceHintScaled, DoublingSearch };

struct PenaltyConfig {
  PenaltyRule rule = PenaltyRule::TraceHintScaled;
  double alpha = 0.0;          // used by Explicit
  int doubling_max_exponent = 12;  // alpha in {2, 4, ..., 2^d}

  // Penalty weight for a single solve. Throws std::invalid_argument for
  // DoublingSearch (which runs many solves) or when no hint is available.
  double resolve(const SdpProblem& problem) const;
};

// Smallest eigenpair of Z(y) and the resulting penalized dual value.
struct PenaltyEval {
  double g_val = 0.0;
  double lambda_min = 0.0;
  Vector v;
  bool converged = false;
  double residual = 0.0;
  int matvecs = 0;
};

struct DualIterate {
  Vector y;
  double g_val = 0.0;
  double lambda_min = 0.0;
  Vector v;
  Vector subgrad;
  int iter = 0;
  double wall_time = 0.0;
  bool eig_converged = true;
};

enum class ScheduleKind { PolyakEstimate, InvSqrt, Adaptive };

class StepSchedule {
 public:
  // eta_k = max(g_k - target, 0) / ||s_k||^2, falling back to eta0 / sqrt(k)
  // once the target has been reached.
  static StepSchedule polyak(double target_gval, double eta0 = 1.0);
  // eta_k = eta0 / sqrt(k).
  static StepSchedule inv_sqrt(double eta0);
  // eta_k = eta0 / sqrt(sum_{i <= k} ||s_i||^2).
  static StepSchedule adaptive(double eta0);

  ScheduleKind kind() const { return kind_; }
  double eta0() const { return eta0_; }
  double target() const { return target_; }

  // Step for iteration k >= 1 given the current value and subgradient.
  double next(int k, double g_val, const Vector& subgrad);

 private:
  StepSchedule(ScheduleKind kind, double eta0, double target);
  ScheduleKind kind_;
  double eta0_;
  double target_;
  double accumulated_ = 0.0;
};

struct StopCriteria {
  int max_iters = 0;         // 0 disables
  double time_budget = 0.0;  // seconds, 0 disables
  std::optional<double> target_gval;
};

struct TraceRow {
  int iter = 0;
  double wall_time = 0.0;
  double g_val = 0.0;
  double lambda_min = 0.0;
  double best_g_val = 0.0;
};

struct DualResult {
  DualIterate best;
  DualIterate last;
  std::vector<TraceRow> trace;
  int iterations = 0;
  bool diverged = false;
  std::string message;
};

// Called after every iterate; returning false stops the solve.
using IterationCallback = std::function<bool(const DualIterate& current, const DualIterate& best)>;

PenaltyEval eval_penalized(const SdpProblem& problem, const Vector& y, double alpha,
                           const EigensolverConfig& cfg, const Vector* warm_start = nullptr);

// -b + alpha A(v v') when lambda_min < 0, else -b.
Vector subgradient(const SdpProblem& problem, const Vector& y, double alpha, double lambda_min,
                   const Vector& v);

DualResult solve_dual(const SdpProblem& problem, double alpha, StepSchedule schedule,
                      const EigensolverConfig& cfg, const StopCriteria& stop,
                      const Vector* y0 = nullptr, const IterationCallback& callback = {});

// Lower bound -eps / (alpha - alpha_bar) on lambda_min(Z(y)) for a y whose
// penalized value is eps above optimal.
double infeasibility_bound(double alpha, double alpha_bar, double eps);

struct RepairResult {
  Vector y;
  double gamma = 1.0;
  double lambda_min = 0.0;  // of Z(y) after repair
  int attempts = 0;
  bool verified = false;
};

// Moves y1 toward the strictly feasible anchor y2 just far enough to make
// Z(y) psd. eps bounds the infeasibility of y1 and is raised to
// -lambda_min(Z(y1)) if that is larger. Throws SolverError if y2 is not
// strictly feasible.
RepairResult repair_feasibility(const SdpProblem& problem, const Vector& y1, const Vector& y2,
                                double eps, const EigensolverConfig& cfg);

// A strictly dual feasible point when one is known from structure: y = 0 for
// identity cost, and a multiple of the ones vector for the diagonal map.
std::optional<Vector> default_anchor(const SdpProblem& problem, const EigensolverConfig& cfg);

}  // namespace sdpr
