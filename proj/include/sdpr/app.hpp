#pragma once

#include "sdpr/dual_solver.hpp"
#include "sdpr/oracle.hpp"
#include "sdpr/problem.hpp"
#include "sdpr/recovery.hpp"
#include "sdpr/spectral.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace sdpr::app {

enum ExitCode : int { kOk = 0, kSolverFailure = 1, kInputError = 2, kSizeLimit = 3 };

// Problem kinds: maxcut (--graph), matcomp (--obs), synthetic-maxcut,
// synthetic-matcomp, trace-toy, degenerate.
struct ProblemSpec {
  std::string kind = "maxcut";
  std::string graph_path;
  std::string obs_path;
  Eigen::Index n = 100;         // synthetic-maxcut vertices, trace-toy size
  double edge_prob = 0.1;       // synthetic-maxcut
  int scale = 1;                // synthetic-matcomp: n1 = 75c, n2 = 50c
  Eigen::Index planted_rank = 5;
  Eigen::Index observations = 0;  // synthetic-matcomp, 0 selects the default count
  std::uint64_t seed = 1;
};

struct BuiltProblem {
  std::optional<SdpProblem> problem;
  std::string description;
};

// Throws InputError for unreadable or malformed input.
BuiltProblem build_problem(const ProblemSpec& spec);

// minimize tr(X) subject to tr(X) = 1.
SdpProblem trace_toy(Eigen::Index n);

// n = 3 instance with a unique primal and dual pair that fails strict
// complementarity: X* = diag(1, 0, 0), y* = 0, Z(y*) = diag(0, 0, 1).
SdpProblem degenerate_instance();

struct RunConfig {
  ProblemSpec problem;
  std::string alpha = "auto";     // number, "auto" (1.1 trace hint) or "doubling"
  std::string schedule = "adaptive";  // polyak (needs target) | invsqrt | adaptive
  double eta0 = 1.0;
  std::optional<double> target;   // polyak target value of g_alpha
  std::string rank = "auto";      // integer or "auto"
  Eigen::Index rank_budget = 10;
  int option = 1;
  double gamma = 1.1;
  std::vector<int> recover_at;    // empty selects 10, 100, 1000, ...
  int max_iters = 1000;
  double time_budget = 0.0;
  double tol = 1e-8;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
  std::vector<double> noise = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5};
  int trials = 1;
  Eigen::Index oracle_max_n = 50;
};

// Each command returns an ExitCode and writes its artifacts to out_dir.
int cmd_solve(const RunConfig& cfg, std::ostream& log);
int cmd_perturb(const RunConfig& cfg, std::ostream& log);
int cmd_oracle(const RunConfig& cfg, std::ostream& log);

// 10, 100, 1000, ... up to max_iters, with max_iters itself appended.
std::vector<int> default_recovery_schedule(int max_iters);

struct PerturbRow {
  double noise = 0.0;
  int trial = 0;
  Eigen::Index r = 0;
  int option = 1;
  double dual_rel_subopt = 0.0;  // |p* + g_alpha(y)| / |p*|
  double rel_subopt = 0.0;       // |tr(C X) - p*| / |p*|
  double rel_infeas = 0.0;       // ||A(X) - b|| / ||b||
  double rel_dist = 0.0;         // ||X - X*||_F / ||X*||_F
};

// y = y* + noise s ||y*|| with s uniform on the unit sphere; for each rank
// in `ranks` both recovery options are run. A noise level of 0 is allowed.
std::vector<PerturbRow> perturbation_study(const SdpProblem& problem,
                                           const DenseSolution& oracle,
                                           const std::vector<double>& noise, int trials,
                                           std::uint64_t seed, double alpha,
                                           const std::vector<Eigen::Index>& ranks,
                                           const RecoveryConfig& rec_cfg,
                                           const EigensolverConfig& eig_cfg);

// Least-squares slope of log(y) against log(x), over pairs with both
// entries positive.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace sdpr::app
