#include "sdpr/dual_solver.hpp"

#include "sdpr/errors.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace sdpr {

double PenaltyConfig::resolve(const SdpProblem& problem) const {
  switch (rule) {
    case PenaltyRule::Explicit:
      if (!(alpha > 0.0)) throw std::invalid_argument("penalty alpha must be positive");
      return alpha;
    case PenaltyRule::TraceHintScaled:
      if (!problem.trace_hint || !(*problem.trace_hint > 0.0)) {
        throw std::invalid_argument("trace-hint penalty rule needs a positive trace hint");
      }
      return 1.1 * *problem.trace_hint;
    case PenaltyRule::DoublingSearch:
      break;
  }
  throw std::invalid_argument("doubling search does not resolve to a single alpha");
}

// ---------------------------------------------------------------------------

StepSchedule::StepSchedule(ScheduleKind kind, double eta0, double target)
    : kind_(kind), eta0_(eta0), target_(target) {
  if (!(eta0 > 0.0)) throw std::invalid_argument("base step must be positive");
}

StepSchedule StepSchedule::polyak(double target_gval, double eta0) {
  return StepSchedule(ScheduleKind::PolyakEstimate, eta0, target_gval);
}

StepSchedule StepSchedule::inv_sqrt(double eta0) {
  return StepSchedule(ScheduleKind::InvSqrt, eta0, 0.0);
}

StepSchedule StepSchedule::adaptive(double eta0) {
  return StepSchedule(ScheduleKind::Adaptive, eta0, 0.0);
}

double StepSchedule::next(int k, double g_val, const Vector& subgrad) {
  if (k < 1) throw std::invalid_argument("iteration index starts at 1");
  const double fallback = eta0_ / std::sqrt(static_cast<double>(k));
  const double sq = subgrad.squaredNorm();
  switch (kind_) {
    case ScheduleKind::InvSqrt:
      return fallback;
    case ScheduleKind::PolyakEstimate:
      if (sq > 0.0 && g_val > target_) return (g_val - target_) / sq;
      return fallback;
    case ScheduleKind::Adaptive:
      accumulated_ += sq;
      if (accumulated_ > 0.0) return eta0_ / std::sqrt(accumulated_);
      return eta0_;
  }
  return fallback;
}

// ---------------------------------------------------------------------------

PenaltyEval eval_penalized(const SdpProblem& problem, const Vector& y, double alpha,
                           const EigensolverConfig& cfg, const Vector* warm_start) {
  if (!(alpha > 0.0)) throw std::invalid_argument("penalty alpha must be positive");
  SlackOperator z(problem, y);
  EigenPair ep = min_eigpair(z, cfg, warm_start);
  PenaltyEval out;
  out.lambda_min = ep.value;
  out.v = std::move(ep.vector);
  out.converged = ep.converged;
  out.residual = ep.residual;
  out.matvecs = ep.matvecs;
  out.g_val = -problem.b.dot(y) + alpha * std::max(-ep.value, 0.0);
  return out;
}

Vector subgradient(const SdpProblem& problem, const Vector&, double alpha, double lambda_min,
                   const Vector& v) {
  Vector g = -problem.b;
  if (lambda_min < 0.0) problem.constraints->add_forward_rank1(alpha, v, v, g);
  return g;
}

DualResult solve_dual(const SdpProblem& problem, double alpha, StepSchedule schedule,
                      const EigensolverConfig& cfg, const StopCriteria& stop, const Vector* y0,
                      const IterationCallback& callback) {
  if (stop.max_iters <= 0 && stop.time_budget <= 0.0 && !stop.target_gval) {
    throw std::invalid_argument("solve_dual needs at least one stopping criterion");
  }
  if (!(alpha > 0.0)) throw std::invalid_argument("penalty alpha must be positive");

  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(clock::now() - t0).count(); };

  DualResult out;
  DualIterate cur;
  cur.y = y0 != nullptr ? *y0 : Vector::Zero(problem.m());
  if (cur.y.size() != problem.m()) throw std::invalid_argument("y0 has wrong length");

  double first_g = 0.0;
  const Vector* warm = nullptr;
  for (int k = 1;; ++k) {
    PenaltyEval ev = eval_penalized(problem, cur.y, alpha, cfg, warm);
    cur.g_val = ev.g_val;
    cur.lambda_min = ev.lambda_min;
    cur.v = std::move(ev.v);
    cur.eig_converged = ev.converged;
    cur.subgrad = subgradient(problem, cur.y, alpha, cur.lambda_min, cur.v);
    cur.iter = k;
    cur.wall_time = elapsed();
    warm = &cur.v;

    if (k == 1 || cur.g_val < out.best.g_val) out.best = cur;
    out.trace.push_back({k, cur.wall_time, cur.g_val, cur.lambda_min, out.best.g_val});
    out.iterations = k;

    if (k == 1) first_g = cur.g_val;
    if (!std::isfinite(cur.g_val) || cur.g_val > 1e6 * std::max(std::abs(first_g), 1.0)) {
      out.diverged = true;
      out.message = "penalized dual value " + std::to_string(cur.g_val) +
                    " exceeds 1e6 times its initial value " + std::to_string(first_g) +
                    " at iteration " + std::to_string(k);
      break;
    }
    if (callback && !callback(cur, out.best)) {
      out.message = "stopped by callback";
      break;
    }
    if (stop.target_gval && out.best.g_val <= *stop.target_gval) {
      out.message = "target value reached";
      break;
    }
    if (stop.max_iters > 0 && k >= stop.max_iters) {
      out.message = "iteration limit reached";
      break;
    }
    if (stop.time_budget > 0.0 && cur.wall_time >= stop.time_budget) {
      out.message = "time budget exhausted";
      break;
    }

    const double eta = schedule.next(k, cur.g_val, cur.subgrad);
    // Keep the eigenvector for the warm start; only y moves.
    cur.y -= eta * cur.subgrad;
  }
  out.last = cur;
  return out;
}

double infeasibility_bound(double alpha, double alpha_bar, double eps) {
  if (!(alpha > alpha_bar) || alpha_bar < 0.0) {
    throw std::invalid_argument("infeasibility bound needs alpha > alpha_bar >= 0");
  }
  return -eps / (alpha - alpha_bar);
}

RepairResult repair_feasibility(const SdpProblem& problem, const Vector& y1, const Vector& y2,
                                double eps, const EigensolverConfig& cfg) {
  SlackOperator z2(problem, y2);
  const EigenPair anchor = min_eigpair(z2, cfg);
  const double lam2 = anchor.value;
  if (!(lam2 > 0.0)) {
    throw SolverError("repair anchor is not strictly dual feasible (lambda_min = " +
                      std::to_string(lam2) + ")");
  }
  SlackOperator z1(problem, y1);
  const EigenPair start = min_eigpair(z1, cfg);
  double e = std::max({eps, -start.value, 0.0});

  RepairResult out;
  const double accept = -cfg.tol;
  for (int attempt = 1; attempt <= 40; ++attempt) {
    out.attempts = attempt;
    out.gamma = lam2 / (e + lam2);
    out.y = out.gamma * y1 + (1.0 - out.gamma) * y2;
    SlackOperator zg(problem, out.y);
    const EigenPair check = min_eigpair(zg, cfg, &start.vector);
    out.lambda_min = check.value;
    if (check.value >= accept) {
      out.verified = true;
      return out;
    }
    // Numerical miss: pretend y1 is a bit more infeasible than measured.
    e = std::max(1.5 * e, -check.value / out.gamma);
  }
  return out;
}

std::optional<Vector> default_anchor(const SdpProblem& problem, const EigensolverConfig& cfg) {
  if (problem.cost.kind() == CostKind::Identity) return Vector::Zero(problem.m());
  const Vector zero = Vector::Zero(problem.m());
  SlackOperator c_op(problem, zero);
  const double lam_c = min_eigpair(c_op, cfg).value;
  if (problem.constraints->name() == "diag-equality") {
    return Vector::Constant(problem.m(), lam_c - 1.0);
  }
  if (lam_c > cfg.tol) return zero;
  return std::nullopt;
}

}  // namespace sdpr
