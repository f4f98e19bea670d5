#include "sdpr/app.hpp"

#include "sdpr/alloc_audit.hpp"
#include "sdpr/diagnostics.hpp"
#include "sdpr/errors.hpp"
#include "sdpr/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>

namespace sdpr::app {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kVersion = "0.1.0";

double parse_number(const std::string& text, const char* what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw InputError(std::string("invalid ") + what + ": '" + text + "'");
  }
  return v;
}

std::string eigen_version() {
  return std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
         std::to_string(EIGEN_MINOR_VERSION);
}

// Opens `<dir>/<name>.partial`; finalize() renames every file it opened.
class ArtifactSet {
 public:
  explicit ArtifactSet(std::string dir) : dir_(std::move(dir)) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw InputError("cannot create output directory '" + dir_ + "': " + ec.message());
  }

  std::ofstream open(const std::string& name) {
    const std::string path = dir_ + "/" + name + ".partial";
    std::ofstream out(path);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << std::setprecision(17);
    names_.push_back(name);
    return out;
  }

  void track(const std::string& name) { names_.push_back(name); }
  const std::string& dir() const { return dir_; }

  void finalize() {
    for (const std::string& name : names_) {
      fs::rename(dir_ + "/" + name + ".partial", dir_ + "/" + name);
    }
  }

 private:
  std::string dir_;
  std::vector<std::string> names_;
};

double resolve_alpha(const RunConfig& cfg, const SdpProblem& problem) {
  if (cfg.alpha == "auto") {
    if (!problem.trace_hint || !(*problem.trace_hint > 0.0)) {
      throw InputError("--alpha auto needs a trace hint; pass a number or 'doubling'");
    }
    PenaltyConfig pc;
    pc.rule = PenaltyRule::TraceHintScaled;
    return pc.resolve(problem);
  }
  const double a = parse_number(cfg.alpha, "--alpha");
  if (!(a > 0.0)) throw InputError("--alpha must be positive");
  return a;
}

StepSchedule make_schedule(const RunConfig& cfg) {
  if (!(cfg.eta0 > 0.0)) throw InputError("--eta0 must be positive");
  if (cfg.schedule == "polyak") {
    if (!cfg.target) throw InputError("--schedule polyak needs --target");
    return StepSchedule::polyak(*cfg.target, cfg.eta0);
  }
  if (cfg.schedule == "invsqrt") return StepSchedule::inv_sqrt(cfg.eta0);
  if (cfg.schedule == "adaptive") return StepSchedule::adaptive(cfg.eta0);
  throw InputError("unknown schedule '" + cfg.schedule + "'");
}

Eigen::Index resolve_rank(const RunConfig& cfg, const SdpProblem& problem) {
  Eigen::Index r = 0;
  if (cfg.rank == "auto") {
    r = default_rank(problem.n(), problem.m(), cfg.rank_budget);
  } else {
    const double v = parse_number(cfg.rank, "--rank");
    if (v != std::floor(v)) throw InputError("--rank must be an integer or 'auto'");
    r = static_cast<Eigen::Index>(v);
  }
  if (r < 1 || r >= problem.n()) {
    throw InputError("--rank must satisfy 1 <= r < n = " + std::to_string(problem.n()));
  }
  return r;
}

std::vector<int> resolve_schedule(const RunConfig& cfg) {
  std::vector<int> at = cfg.recover_at.empty() ? default_recovery_schedule(cfg.max_iters)
                                               : cfg.recover_at;
  for (std::size_t i = 0; i < at.size(); ++i) {
    if (at[i] < 1 || (i > 0 && at[i] <= at[i - 1])) {
      throw InputError("--recover-at must be strictly increasing positive integers");
    }
  }
  return at;
}

void write_recovery_header(std::ostream& out) {
  out << "iter,option,r,residual,objective,primal_subopt_bound,dimacs_feas,dimacs_gap,T,"
         "sigma_min_AV\n";
}

void write_recovery_row(std::ostream& out, int iter, int option, const CompressedSolution& sol,
                        const QualityReport& q, const CompressedOperators& ops) {
  out << iter << ',' << option << ',' << sol.basis.V.cols() << ',' << sol.residual << ','
      << sol.objective << ',' << q.primal_subopt_bound << ',' << q.dimacs_feas << ','
      << q.dimacs_gap << ',' << ops.basis().threshold.value_or(std::nan("")) << ','
      << ops.sigma_min() << '\n';
}

// Logs both rows of a recovery event and returns the final solution's report.
QualityReport log_recovery(std::ostream& out, int iter, const SdpProblem& problem,
                           const RecoveryOutcome& rec, const DualIterate& at, double alpha) {
  const QualityReport qf = quality(problem, rec.minfeas, at.y, alpha, at.lambda_min);
  write_recovery_row(out, iter, 1, rec.minfeas, qf, rec.ops);
  if (!rec.minobj) return qf;
  const QualityReport qo = quality(problem, *rec.minobj, at.y, alpha, at.lambda_min);
  write_recovery_row(out, iter, 2, *rec.minobj, qo, rec.ops);
  return qo;
}

json quality_json(const QualityReport& q) {
  json j;
  j["primal_objective"] = q.primal_objective;
  j["g_alpha"] = q.g_alpha;
  j["primal_subopt_bound"] = q.primal_subopt_bound;
  j["primal_infeas"] = q.primal_infeas;
  j["dual_infeas"] = q.dual_infeas;
  j["dimacs_feas"] = q.dimacs_feas;
  j["dimacs_gap"] = q.dimacs_gap;
  j["distance_bound"] = q.distance_bound ? json(*q.distance_bound) : json(nullptr);
  return j;
}

json config_json(const RunConfig& cfg) {
  json j;
  j["problem"] = {{"kind", cfg.problem.kind},
                  {"graph", cfg.problem.graph_path},
                  {"obs", cfg.problem.obs_path},
                  {"n", cfg.problem.n},
                  {"edge_prob", cfg.problem.edge_prob},
                  {"scale", cfg.problem.scale},
                  {"planted_rank", cfg.problem.planted_rank},
                  {"seed", cfg.problem.seed}};
  j["alpha"] = cfg.alpha;
  j["schedule"] = cfg.schedule;
  j["eta0"] = cfg.eta0;
  j["target"] = cfg.target ? json(*cfg.target) : json(nullptr);
  j["rank"] = cfg.rank;
  j["option"] = cfg.option;
  j["gamma"] = cfg.gamma;
  j["max_iters"] = cfg.max_iters;
  j["time_budget"] = cfg.time_budget;
  j["tol"] = cfg.tol;
  j["seed"] = cfg.seed;
  return j;
}

template <typename Fn>
int guarded(std::ostream& log, Fn&& fn) {
  try {
    return fn();
  } catch (const InputError& e) {
    log << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const SizeLimitError& e) {
    log << "size limit: " << e.what() << '\n';
    return kSizeLimit;
  } catch (const SolverError& e) {
    log << "solver failure: " << e.what() << '\n';
    return kSolverFailure;
  } catch (const std::invalid_argument& e) {
    log << "invalid configuration: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return kSolverFailure;
  }
}

}  // namespace

// ---------------------------------------------------------------------------

SdpProblem trace_toy(Eigen::Index n) {
  if (n < 1) throw std::invalid_argument("trace toy needs n >= 1");
  SparseMatrix eye(n, n);
  eye.setIdentity();
  auto map = std::make_shared<GenericSparseMap>(n, std::vector<SparseMatrix>{eye});
  return SdpProblem(CostOracle::identity(n), std::move(map), Vector::Ones(1), 1.0);
}

SdpProblem degenerate_instance() {
  const Eigen::Index n = 3;
  auto sparse = [n](std::initializer_list<Eigen::Triplet<double>> t) {
    SparseMatrix m(n, n);
    m.setFromTriplets(t.begin(), t.end());
    return m;
  };
  SparseMatrix c = sparse({{2, 2, 1.0}});
  std::vector<SparseMatrix> mats;
  mats.push_back(sparse({{0, 0, 1.0}}));
  mats.push_back(sparse({{1, 2, 1.0}, {2, 1, 1.0}}));
  mats.push_back(sparse({{1, 1, 1.0}, {0, 2, 1.0}, {2, 0, 1.0}}));
  Vector b(3);
  b << 1.0, 0.0, 0.0;
  return SdpProblem(CostOracle::sparse(std::move(c)),
                    std::make_shared<GenericSparseMap>(n, std::move(mats)), std::move(b), 1.0);
}

BuiltProblem build_problem(const ProblemSpec& spec) {
  BuiltProblem out;
  if (spec.kind == "maxcut") {
    if (spec.graph_path.empty()) throw InputError("--problem maxcut needs --graph");
    const io::Graph g = io::read_graph_file(spec.graph_path);
    out.problem.emplace(build_maxcut(g.n, g.edges));
    out.description = "maxcut " + spec.graph_path;
  } else if (spec.kind == "matcomp") {
    if (spec.obs_path.empty()) throw InputError("--problem matcomp needs --obs");
    const io::ObservationSet o = io::read_observations_file(spec.obs_path);
    out.problem.emplace(build_matrix_completion(o.n1, o.n2, o.observations));
    out.description = "matcomp " + spec.obs_path;
  } else if (spec.kind == "synthetic-maxcut") {
    if (spec.n < 2 || !(spec.edge_prob >= 0.0 && spec.edge_prob <= 1.0)) {
      throw InputError("synthetic-maxcut needs n >= 2 and 0 <= edge_prob <= 1");
    }
    out.problem.emplace(build_maxcut(spec.n, random_graph(spec.n, spec.edge_prob, spec.seed)));
    out.description = "synthetic-maxcut n=" + std::to_string(spec.n);
  } else if (spec.kind == "synthetic-matcomp") {
    if (spec.scale < 1 || spec.planted_rank < 1) {
      throw InputError("synthetic-matcomp needs scale >= 1 and rank >= 1");
    }
    const Eigen::Index n1 = 75 * spec.scale;
    const Eigen::Index n2 = 50 * spec.scale;
    const Eigen::Index k =
        spec.observations > 0 ? spec.observations : default_observation_count(n1, n2);
    SyntheticCompletion sc =
        synthetic_matrix_completion(n1, n2, spec.planted_rank, k, spec.seed);
    // The lifted optimum has trace 2 ||X||_*, so alpha = 1.1 hint = 2.2 ||X||_*.
    sc.problem.trace_hint = 2.0 * sc.nuclear_norm;
    out.problem.emplace(std::move(sc.problem));
    out.description = "synthetic-matcomp c=" + std::to_string(spec.scale);
  } else if (spec.kind == "trace-toy") {
    out.problem.emplace(trace_toy(spec.n));
    out.description = "trace-toy n=" + std::to_string(spec.n);
  } else if (spec.kind == "degenerate") {
    out.problem.emplace(degenerate_instance());
    out.description = "degenerate n=3";
  } else {
    throw InputError("unknown problem kind '" + spec.kind + "'");
  }
  return out;
}

std::vector<int> default_recovery_schedule(int max_iters) {
  std::vector<int> at;
  for (long long k = 10; k <= max_iters; k *= 10) at.push_back(static_cast<int>(k));
  if (max_iters >= 1 && (at.empty() || at.back() != max_iters)) at.push_back(max_iters);
  return at;
}

// ---------------------------------------------------------------------------

int cmd_solve(const RunConfig& cfg, std::ostream& log) {
  return guarded(log, [&]() -> int {
    audit::reset();
    const BuiltProblem built = build_problem(cfg.problem);
    const SdpProblem& problem = *built.problem;
    if (cfg.option != 1 && cfg.option != 2) throw InputError("--option must be 1 or 2");
    if (!(cfg.gamma >= 1.0)) throw InputError("--gamma must be >= 1");
    if (cfg.max_iters <= 0 && cfg.time_budget <= 0.0) {
      throw InputError("need --max-iters or --time-budget");
    }
    const bool doubling = cfg.alpha == "doubling";
    const double alpha_fixed = doubling ? 0.0 : resolve_alpha(cfg, problem);
    const StepSchedule schedule = make_schedule(cfg);
    const std::vector<int> recover_at = resolve_schedule(cfg);

    EigensolverConfig eig;
    eig.tol = cfg.tol;
    eig.seed = cfg.seed;
    RecoveryConfig rec_cfg;
    rec_cfg.r = resolve_rank(cfg, problem);
    rec_cfg.gamma = cfg.gamma;
    rec_cfg.validate();
    StopCriteria stop;
    stop.max_iters = cfg.max_iters;
    stop.time_budget = cfg.time_budget;

    ArtifactSet art(cfg.out_dir);
    std::ofstream trace = art.open("trace.csv");
    trace << "iter,wall_time_s,g_alpha,lambda_min,dual_infeas,best_g_alpha\n";
    std::ofstream recovery = art.open("recovery.csv");
    write_recovery_header(recovery);
    log << "problem: " << built.description << " (n=" << problem.n() << ", m=" << problem.m()
        << ")\n";

    DualResult dual;
    std::optional<RecoveryOutcome> final_rec;
    std::optional<QualityReport> final_q;
    double alpha = alpha_fixed;
    int solves = 1;
    auto trace_row = [&](const TraceRow& t) {
      trace << t.iter << ',' << t.wall_time << ',' << t.g_val << ',' << t.lambda_min << ','
            << std::max(-t.lambda_min, 0.0) << ',' << t.best_g_val << '\n';
    };

    if (doubling) {
      AlphaSearchResult found = alpha_doubling_search(problem, schedule, eig, stop, rec_cfg,
                                                      cfg.option, 12);
      alpha = found.alpha;
      solves = found.solves;
      dual = std::move(found.dual);
      for (const TraceRow& t : dual.trace) trace_row(t);
      final_rec = std::move(found.recovery);
    } else {
      std::set<int> events(recover_at.begin(), recover_at.end());
      int last_event = 0;
      auto on_iterate = [&](const DualIterate& cur, const DualIterate& best) {
        trace_row({cur.iter, cur.wall_time, cur.g_val, cur.lambda_min,
                   std::min(best.g_val, cur.g_val)});
        if (events.count(cur.iter) != 0U) {
          final_rec.emplace(recover(problem, best.y, cfg.option, rec_cfg, eig, &best.v));
          final_q = log_recovery(recovery, cur.iter, problem, *final_rec, best, alpha);
          last_event = cur.iter;
        }
        return true;
      };
      dual = solve_dual(problem, alpha, schedule, eig, stop, nullptr, on_iterate);
      // The final recovery is reused when the last iterate was a scheduled event.
      if (last_event != dual.iterations) final_rec.reset();
    }
    trace.flush();
    recovery.flush();

    json summary;
    summary["version"] = {{"sdpr", kVersion}, {"eigen", eigen_version()}};
    summary["config"] = config_json(cfg);
    summary["seeds"] = {{"problem", cfg.problem.seed}, {"solver", cfg.seed}};
    summary["problem"] = {{"description", built.description},
                          {"n", problem.n()},
                          {"m", problem.m()},
                          {"trace_hint", problem.trace_hint ? json(*problem.trace_hint)
                                                            : json(nullptr)}};
    summary["alpha"] = alpha;
    summary["dual"] = {{"iterations", dual.iterations},
                       {"best_iter", dual.best.iter},
                       {"best_g_alpha", dual.best.g_val},
                       {"best_lambda_min", dual.best.lambda_min},
                       {"diverged", dual.diverged},
                       {"message", dual.message},
                       {"solves", solves}};

    if (dual.diverged) {
      std::ofstream s = art.open("summary.json");
      s << summary.dump(2) << '\n';
      log << "solver failure: " << dual.message << '\n';
      return kSolverFailure;
    }

    if (!final_rec || !final_q) {
      if (!final_rec) {
        final_rec.emplace(
            recover(problem, dual.best.y, cfg.option, rec_cfg, eig, &dual.best.v));
      }
      final_q = log_recovery(recovery, dual.iterations, problem, *final_rec, dual.best, alpha);
      recovery.flush();
    }
    const QualityReport& q = *final_q;

    double sigma_max_A = std::numeric_limits<double>::quiet_NaN();
    try {
      sigma_max_A = operator_norm_Amap(problem, 100, cfg.seed);
    } catch (const SizeLimitError&) {
    }
    const ConditioningReport cond = conditioning(final_rec->ops, sigma_max_A);

    const CompressedSolution& sol = final_rec->final_solution();
    write_factors(art.dir(), sol, ".partial");
    art.track("V.txt");
    art.track("S.txt");

    summary["quality"] = quality_json(q);
    summary["recovery"] = {{"option", cfg.option},
                           {"r", rec_cfg.r},
                           {"gamma", cfg.gamma},
                           {"residual", sol.residual},
                           {"objective", sol.objective},
                           {"delta", sol.delta},
                           {"converged", sol.converged},
                           {"iterations", sol.iterations}};
    summary["conditioning"] = {{"T", cond.T},
                               {"sigma_min_AV", cond.sigma_min_AV},
                               {"sigma_max_A", cond.sigma_max_A},
                               {"kappa_V", cond.kappa_infinite ? json(nullptr)
                                                               : json(cond.kappa_V)},
                               {"clustered", cond.clustered}};
    summary["alloc_audit"] = {{"enabled", audit::enabled()},
                              {"peak_doubles", audit::peak_doubles()}};
    {
      std::ofstream s = art.open("summary.json");
      s << summary.dump(2) << '\n';
    }
    trace.close();
    recovery.close();
    art.finalize();
    log << "done: best g_alpha " << dual.best.g_val << ", dimacs_feas " << q.dimacs_feas
        << ", dimacs_gap " << q.dimacs_gap << '\n';
    return kOk;
  });
}

// ---------------------------------------------------------------------------

int cmd_oracle(const RunConfig& cfg, std::ostream& log) {
  return guarded(log, [&]() -> int {
    const BuiltProblem built = build_problem(cfg.problem);
    const SdpProblem& problem = *built.problem;
    OracleConfig oc;
    oc.max_n = cfg.oracle_max_n;
    const DenseSolution sol = solve_dense(problem, oc);
    const SolutionRank rank = enumerate_solution_rank(sol);

    ArtifactSet art(cfg.out_dir);
    json j;
    j["version"] = {{"sdpr", kVersion}, {"eigen", eigen_version()}};
    j["problem"] = {{"description", built.description}, {"n", problem.n()}, {"m", problem.m()}};
    j["p_star"] = sol.p_star;
    j["d_star"] = sol.d_star;
    j["primal_residual"] = sol.primal_residual;
    j["dual_residual"] = sol.dual_residual;
    j["gap"] = sol.gap;
    j["iterations"] = sol.iterations;
    j["certified"] = sol.certified;
    j["rank"] = rank.rank;
    if (problem.n() <= 50) {
      const RegularityReport reg = regularity_probe(problem, sol.X, sol.y);
      j["regularity"] = {{"strong_duality_gap", reg.strong_duality_gap},
                         {"complementarity_residual", reg.complementarity_residual},
                         {"rank_X", reg.rank_X},
                         {"rank_Z", reg.rank_Z},
                         {"rank_sum", reg.rank_sum},
                         {"n", reg.n},
                         {"strictly_complementary", reg.strictly_complementary},
                         {"rank_sum_deficit", reg.rank_sum < reg.n},
                         {"primal_unique", reg.primal_unique},
                         {"dual_unique", reg.dual_unique},
                         {"sigma_min_primal_face", reg.sigma_min_primal_face},
                         {"sigma_min_D", reg.sigma_min_D}};
    }
    {
      std::ofstream out = art.open("oracle.json");
      out << j.dump(2) << '\n';
    }
    {
      std::ofstream out = art.open("X.txt");
      io::write_dense(out, sol.X);
    }
    {
      std::ofstream out = art.open("y.txt");
      io::write_dense(out, sol.y);
    }
    art.finalize();
    log << "p* = " << sol.p_star << ", d* = " << sol.d_star << ", rank " << rank.rank
        << (sol.certified ? "" : " (residual targets not met)") << '\n';
    return sol.certified ? kOk : kSolverFailure;
  });
}

// ---------------------------------------------------------------------------

std::vector<PerturbRow> perturbation_study(const SdpProblem& problem,
                                           const DenseSolution& oracle,
                                           const std::vector<double>& noise, int trials,
                                           std::uint64_t seed, double alpha,
                                           const std::vector<Eigen::Index>& ranks,
                                           const RecoveryConfig& rec_cfg,
                                           const EigensolverConfig& eig_cfg) {
  Rng rng(seed);
  const double p_star = oracle.p_star;
  const double p_scale = std::abs(p_star) > 0.0 ? std::abs(p_star) : 1.0;
  const double x_norm = oracle.X.norm();
  const double b_norm = problem.b.norm() > 0.0 ? problem.b.norm() : 1.0;
  const double y_norm = oracle.y.norm();

  std::vector<PerturbRow> rows;
  for (double level : noise) {
    for (int t = 0; t < trials; ++t) {
      const Vector s = random_unit(problem.m(), rng);
      const Vector y = oracle.y + level * y_norm * s;
      const PenaltyEval ev = eval_penalized(problem, y, alpha, eig_cfg);
      const double dual_rel = std::abs(p_star + ev.g_val) / p_scale;
      for (Eigen::Index r : ranks) {
        RecoveryConfig rc = rec_cfg;
        rc.r = r;
        const RecoveryOutcome rec = recover(problem, y, 2, rc, eig_cfg, &ev.v);
        for (int option = 1; option <= 2; ++option) {
          const CompressedSolution& sol = option == 1 ? rec.minfeas : *rec.minobj;
          const QualityReport q = quality(problem, sol, y, alpha, ev.lambda_min);
          PerturbRow row;
          row.noise = level;
          row.trial = t;
          row.r = r;
          row.option = option;
          row.dual_rel_subopt = dual_rel;
          row.rel_subopt = std::abs(q.primal_objective - p_star) / p_scale;
          row.rel_infeas = q.primal_infeas / b_norm;
          row.rel_dist = (dense_primal(sol) - oracle.X).norm() / x_norm;
          rows.push_back(row);
        }
      }
    }
  }
  return rows;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int k = 0;
  for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) continue;
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++k;
  }
  if (k < 2) return std::nan("");
  const double den = k * sxx - sx * sx;
  if (den == 0.0) return std::nan("");
  return (k * sxy - sx * sy) / den;
}

int cmd_perturb(const RunConfig& cfg, std::ostream& log) {
  return guarded(log, [&]() -> int {
    const BuiltProblem built = build_problem(cfg.problem);
    const SdpProblem& problem = *built.problem;
    if (cfg.trials < 1) throw InputError("--trials must be >= 1");
    OracleConfig oc;
    oc.max_n = cfg.oracle_max_n;
    const DenseSolution oracle = solve_dense(problem, oc);
    if (!oracle.certified) {
      throw SolverError("dense oracle did not reach its residual targets");
    }
    const SolutionRank rank = enumerate_solution_rank(oracle);
    const Eigen::Index n = problem.n();
    const Eigen::Index r1 = std::clamp<Eigen::Index>(rank.rank, 1, n - 1);
    const Eigen::Index r3 = std::clamp<Eigen::Index>(3 * rank.rank, 1, n - 1);
    std::vector<Eigen::Index> ranks{r1};
    if (r3 != r1) ranks.push_back(r3);

    double alpha = 0.0;
    if (cfg.alpha == "auto" && !problem.trace_hint) {
      alpha = 1.1 * oracle.X.trace();
    } else {
      alpha = resolve_alpha(cfg, problem);
    }
    EigensolverConfig eig;
    eig.tol = cfg.tol;
    eig.seed = cfg.seed;
    RecoveryConfig rc;
    rc.gamma = cfg.gamma;

    const std::vector<PerturbRow> rows =
        perturbation_study(problem, oracle, cfg.noise, cfg.trials, cfg.seed, alpha, ranks, rc, eig);

    ArtifactSet art(cfg.out_dir);
    {
      std::ofstream out = art.open("perturb.csv");
      out << "noise,trial,r,option,dual_rel_subopt,rel_subopt,rel_infeas,rel_dist\n";
      for (const PerturbRow& row : rows) {
        out << row.noise << ',' << row.trial << ',' << row.r << ',' << row.option << ','
            << row.dual_rel_subopt << ',' << row.rel_subopt << ',' << row.rel_infeas << ','
            << row.rel_dist << '\n';
      }
    }
    json j;
    j["r_star"] = rank.rank;
    j["p_star"] = oracle.p_star;
    j["alpha"] = alpha;
    j["seed"] = cfg.seed;
    json slopes = json::array();
    for (Eigen::Index r : ranks) {
      for (int option = 1; option <= 2; ++option) {
        std::vector<double> xs, dist, infeas, subopt;
        for (const PerturbRow& row : rows) {
          if (row.r != r || row.option != option) continue;
          xs.push_back(row.dual_rel_subopt);
          dist.push_back(row.rel_dist);
          infeas.push_back(row.rel_infeas);
          subopt.push_back(row.rel_subopt);
        }
        slopes.push_back({{"r", r},
                          {"option", option},
                          {"rel_dist", loglog_slope(xs, dist)},
                          {"rel_infeas", loglog_slope(xs, infeas)},
                          {"rel_subopt", loglog_slope(xs, subopt)}});
      }
    }
    j["slopes"] = slopes;
    {
      std::ofstream out = art.open("perturb_summary.json");
      out << j.dump(2) << '\n';
    }
    art.finalize();
    log << "perturbation study: " << rows.size() << " rows, r* = " << rank.rank << '\n';
    return kOk;
  });
}

}  // namespace sdpr::app
