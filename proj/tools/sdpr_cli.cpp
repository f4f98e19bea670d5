#include "sdpr/app.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>

namespace {

// "maxcut:graph.txt" and "matcomp:obs.csv" are accepted as shorthands.
void split_problem_source(sdpr::app::ProblemSpec& spec) {
  const auto colon = spec.kind.find(':');
  if (colon == std::string::npos) return;
  const std::string path = spec.kind.substr(colon + 1);
  spec.kind = spec.kind.substr(0, colon);
  if (spec.kind == "maxcut") spec.graph_path = path;
  if (spec.kind == "matcomp") spec.obs_path = path;
}

void add_common(CLI::App* cmd, sdpr::app::RunConfig& cfg) {
  auto& p = cfg.problem;
  cmd->add_option("--problem", p.kind,
                  "maxcut | matcomp | synthetic-maxcut | synthetic-matcomp | trace-toy | "
                  "degenerate");
  cmd->add_option("--graph", p.graph_path, "edge list or Matrix Market graph");
  cmd->add_option("--obs", p.obs_path, "observation CSV (i,j,value)");
  cmd->add_option("--n", p.n, "vertices for synthetic-maxcut, size for trace-toy");
  cmd->add_option("--edge-prob", p.edge_prob, "edge probability for synthetic-maxcut");
  cmd->add_option("--scale", p.scale, "synthetic-matcomp scale c (75c x 50c)");
  cmd->add_option("--planted-rank", p.planted_rank, "synthetic-matcomp planted rank");
  cmd->add_option("--observations", p.observations, "synthetic-matcomp observation count");
  cmd->add_option("--problem-seed", p.seed, "seed for synthetic instances");
  cmd->add_option("--alpha", cfg.alpha, "penalty: number, auto or doubling");
  cmd->add_option("--gamma", cfg.gamma, "MinObj slack factor");
  cmd->add_option("--tol", cfg.tol, "eigensolver tolerance");
  cmd->add_option("--seed", cfg.seed, "solver seed");
  cmd->add_option("--out", cfg.out_dir, "output directory");
  cmd->add_option("--oracle-max-n", cfg.oracle_max_n, "size limit of the dense oracle");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Storage-optimal SDP solver: penalized dual subgradient plus low-rank recovery"};
  app.require_subcommand(1);
  sdpr::app::RunConfig cfg;

  CLI::App* solve = app.add_subcommand("solve", "run the dual solver with scheduled recovery");
  add_common(solve, cfg);
  solve->add_option("--rank", cfg.rank, "recovery rank or auto");
  solve->add_option("--rank-budget", cfg.rank_budget, "cap on the auto rank");
  solve->add_option("--option", cfg.option, "1 = MinFeas, 2 = MinObj")->check(CLI::IsMember({1, 2}));
  solve->add_option("--schedule", cfg.schedule, "polyak | invsqrt | adaptive");
  solve->add_option("--eta0", cfg.eta0, "base step size");
  solve->add_option("--target", cfg.target, "target g_alpha value for polyak");
  solve->add_option("--recover-at", cfg.recover_at, "iterations at which to recover")
      ->delimiter(',');
  solve->add_option("--max-iters", cfg.max_iters, "iteration cap");
  solve->add_option("--time-budget", cfg.time_budget, "wall-clock budget in seconds");

  CLI::App* perturb = app.add_subcommand("perturb", "perturbation study around the oracle y*");
  add_common(perturb, cfg);
  perturb->add_option("--noise", cfg.noise, "noise levels")->delimiter(',');
  perturb->add_option("--trials", cfg.trials, "trials per noise level");

  CLI::App* oracle = app.add_subcommand("oracle", "dense reference solve and regularity probe");
  add_common(oracle, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : sdpr::app::kInputError;
  }
  split_problem_source(cfg.problem);

  if (solve->parsed()) return sdpr::app::cmd_solve(cfg, std::cerr);
  if (perturb->parsed()) return sdpr::app::cmd_perturb(cfg, std::cerr);
  return sdpr::app::cmd_oracle(cfg, std::cerr);
}
