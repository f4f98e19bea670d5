#include "support.hpp"

#include "sdpr/dual_solver.hpp"
#include "sdpr/errors.hpp"
#include "sdpr/oracle.hpp"

#include <doctest.h>

#include <cmath>

using namespace sdpr;
using sdpr::testing::dense_lambda_min;
using sdpr::testing::dense_slack;
using sdpr::testing::two_node_maxcut;

namespace {

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

EigensolverConfig tight() {
  EigensolverConfig cfg;
  cfg.tol = 1e-12;
  return cfg;
}

}  // namespace

TEST_CASE("penalized value on the 2-node Max-Cut") {
  const SdpProblem p = two_node_maxcut();
  const PenaltyEval at0 = eval_penalized(p, Vector::Zero(2), 2.2, tight());
  CHECK(at0.lambda_min == doctest::Approx(-2.0).epsilon(1e-10));
  CHECK(at0.g_val == doctest::Approx(4.4).epsilon(1e-10));

  const PenaltyEval at_star = eval_penalized(p, vec2(-2, -2), 2.2, tight());
  CHECK(std::abs(at_star.lambda_min) <= 1e-10);
  CHECK(at_star.g_val == doctest::Approx(4.0).epsilon(1e-10));

  // Strictly feasible: the penalty vanishes.
  const PenaltyEval strict = eval_penalized(p, vec2(-3, -3), 2.2, tight());
  CHECK(strict.lambda_min > 0.0);
  CHECK(strict.g_val == 6.0);
}

TEST_CASE("subgradient selections") {
  const SdpProblem p = two_node_maxcut();
  const Vector v = vec2(1, -1) / std::sqrt(2.0);
  const Vector s = subgradient(p, Vector::Zero(2), 2.2, -2.0, v);
  CHECK((s - vec2(0.1, 0.1)).norm() <= 1e-14);
  CHECK(subgradient(p, vec2(-3, -3), 2.2, 1.0, v) == -p.b);
  CHECK(subgradient(p, vec2(-2, -2), 2.2, 0.0, v) == -p.b);
}

TEST_CASE("step schedules") {
  StepSchedule inv = StepSchedule::inv_sqrt(0.5);
  const Vector s = vec2(3, 4);
  for (int k = 1; k <= 9; ++k) CHECK(inv.next(k, 1.0, s) == 0.5 / std::sqrt(k));

  StepSchedule pol = StepSchedule::polyak(1.0);
  CHECK(pol.next(1, 6.0, s) == doctest::Approx(5.0 / 25.0));
  CHECK(pol.next(4, 1.0, s) > 0.0);

  StepSchedule ada = StepSchedule::adaptive(2.0);
  CHECK(ada.next(1, 0.0, s) == doctest::Approx(2.0 / 5.0));
  CHECK(ada.next(2, 0.0, s) == doctest::Approx(2.0 / std::sqrt(50.0)));

  CHECK_THROWS(StepSchedule::inv_sqrt(0.0));
  CHECK_THROWS(StepSchedule::adaptive(-1.0));
}

TEST_CASE("2-node Max-Cut solve with a Polyak target") {
  const SdpProblem p = two_node_maxcut();
  StopCriteria stop;
  stop.max_iters = 500;
  const DualResult res = solve_dual(p, 2.2, StepSchedule::polyak(4.0), tight(), stop);
  CHECK_FALSE(res.diverged);
  CHECK(res.best.g_val <= 4.0 + 1e-3);
  REQUIRE(res.trace.size() == static_cast<std::size_t>(res.iterations));
  for (std::size_t k = 1; k < res.trace.size(); ++k) {
    CHECK(res.trace[k].best_g_val <= res.trace[k - 1].best_g_val);
    CHECK(res.trace[k].iter == res.trace[k - 1].iter + 1);
  }
}

TEST_CASE("zero-edge Max-Cut converges immediately") {
  const Eigen::Index n = 6;
  const SdpProblem p = build_maxcut(n, {});
  StopCriteria stop;
  stop.max_iters = 10;
  const double alpha = PenaltyConfig{}.resolve(p);
  CHECK(alpha == doctest::Approx(1.1 * n));
  const DualResult res = solve_dual(p, alpha, StepSchedule::adaptive(1.0), tight(), stop);
  CHECK(res.best.g_val <= 1e-6);
}

TEST_CASE("stop criteria and callbacks") {
  const SdpProblem p = two_node_maxcut();
  CHECK_THROWS_AS(solve_dual(p, 2.2, StepSchedule::adaptive(1.0), {}, StopCriteria{}),
                  std::invalid_argument);
  StopCriteria stop;
  stop.max_iters = 1000;
  stop.target_gval = 4.5;
  const DualResult hit = solve_dual(p, 2.2, StepSchedule::adaptive(1.0), {}, stop);
  CHECK(hit.best.g_val <= 4.5);
  CHECK(hit.iterations < 1000);

  int calls = 0;
  StopCriteria many;
  many.max_iters = 1000;
  const DualResult cut = solve_dual(p, 2.2, StepSchedule::adaptive(1.0), {}, many, nullptr,
                                    [&](const DualIterate&, const DualIterate&) {
                                      return ++calls < 7;
                                    });
  CHECK(cut.iterations == 7);
}

TEST_CASE("divergence is detected") {
  const SdpProblem p = two_node_maxcut();
  StopCriteria stop;
  stop.max_iters = 200;
  const DualResult res = solve_dual(p, 2.2, StepSchedule::inv_sqrt(1e9), {}, stop);
  CHECK(res.diverged);
  CHECK_FALSE(res.message.empty());
}

TEST_CASE("inverse square root schedule on a random Max-Cut") {
  const Eigen::Index n = 100;
  const SdpProblem p = build_maxcut(n, random_graph(n, 0.1, 5));
  OracleConfig ocfg;
  ocfg.max_n = n;
  const DenseSolution ref = solve_dense(p, ocfg);
  REQUIRE(ref.certified);
  StopCriteria stop;
  stop.max_iters = 10000;
  const double alpha = 1.1 * n;
  const DualResult res = solve_dual(p, alpha, StepSchedule::inv_sqrt(1.0), {}, stop);
  CHECK(std::abs(res.best.g_val + ref.d_star) / std::abs(ref.d_star) <= 1e-2);
  // Decreasing trend: best value over the last tenth beats the first tenth.
  CHECK(res.trace.back().best_g_val < res.trace[res.trace.size() / 10].best_g_val);
}

TEST_CASE("infeasibility bound") {
  CHECK(infeasibility_bound(2.2, 2.0, 0.1) == doctest::Approx(-0.5));
  CHECK(infeasibility_bound(2.2, 2.0, 0.0) == 0.0);
  CHECK(infeasibility_bound(3.0, 1.0, 1.0) == doctest::Approx(-0.5));
  CHECK_THROWS_AS(infeasibility_bound(2.0, 2.0, 0.1), std::invalid_argument);
}

TEST_CASE("repair examples") {
  const SdpProblem p = two_node_maxcut();
  const RepairResult worked = repair_feasibility(p, vec2(-1.9, -1.9), vec2(-3, -3), 0.1, tight());
  CHECK(worked.gamma == doctest::Approx(10.0 / 11.0));
  CHECK((worked.y - vec2(-2, -2)).norm() <= 1e-12);
  CHECK(worked.verified);

  const RepairResult already = repair_feasibility(p, vec2(-2.5, -2.5), vec2(-3, -3), 0.0, tight());
  CHECK(already.gamma == 1.0);
  CHECK(already.y == vec2(-2.5, -2.5));

  CHECK_THROWS_AS(repair_feasibility(p, vec2(-1.9, -1.9), vec2(-1, -1), 0.1, tight()),
                  SolverError);
}

TEST_CASE("property: repair lands in the feasible set") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto inst = sdpr::testing::planted_instance(6, 2, 5, seed);
    Rng rng(seed + 100);
    const Vector y1 = inst.y_star + 0.3 * random_normal(5, rng);
    const RepairResult rep = repair_feasibility(inst.problem, y1, inst.strict_anchor, 0.0, tight());
    CHECK(dense_lambda_min(dense_slack(inst.problem, rep.y)) >= -10.0 * tight().tol);
  }
}

TEST_CASE("default anchors are strictly feasible") {
  const SdpProblem mc = build_maxcut(30, random_graph(30, 0.2, 8));
  const auto a = default_anchor(mc, tight());
  REQUIRE(a);
  CHECK(dense_lambda_min(dense_slack(mc, *a)) > 0.0);

  const SdpProblem id(CostOracle::identity(4),
                      std::make_shared<DiagEqualityMap>(4), Vector::Ones(4));
  const auto z = default_anchor(id, tight());
  REQUIRE(z);
  CHECK(z->norm() == 0.0);
}

TEST_CASE("property: subgradient inequality and smooth-region gradient") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto inst = sdpr::testing::planted_instance(7, 2, 6, seed);
    const SdpProblem& p = inst.problem;
    Rng rng(seed);
    const double alpha = 3.0 * inst.X_star.trace();
    const Vector y = inst.y_star + random_normal(6, rng);
    const Vector d = random_unit(6, rng);
    const PenaltyEval e = eval_penalized(p, y, alpha, tight());
    const Vector s = subgradient(p, y, alpha, e.lambda_min, e.v);
    for (const double t : {1e-4, 1e-5}) {
      const double g = eval_penalized(p, y + t * d, alpha, tight()).g_val;
      CHECK(g >= e.g_val + t * s.dot(d) - 1e-6 * (1.0 + std::abs(e.g_val)));
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(dense_slack(p, y));
    const Vector ev = es.eigenvalues();
    if (ev(0) < -1e-3 && ev(1) - ev(0) > 1e-3) {
      const double h = 1e-6;
      const double fd = (eval_penalized(p, y + h * d, alpha, tight()).g_val -
                         eval_penalized(p, y - h * d, alpha, tight()).g_val) /
                        (2 * h);
      CHECK(std::abs(fd - s.dot(d)) <= 1e-5 * std::max(1.0, std::abs(s.dot(d))));
    }
  }
}

TEST_CASE("penalty configuration") {
  const SdpProblem p = two_node_maxcut();
  CHECK(PenaltyConfig{}.resolve(p) == doctest::Approx(2.2));
  PenaltyConfig ex;
  ex.rule = PenaltyRule::Explicit;
  ex.alpha = 5.0;
  CHECK(ex.resolve(p) == 5.0);
  ex.alpha = -1.0;
  CHECK_THROWS_AS(ex.resolve(p), std::invalid_argument);
  PenaltyConfig dbl;
  dbl.rule = PenaltyRule::DoublingSearch;
  CHECK_THROWS_AS(dbl.resolve(p), std::invalid_argument);
  const SdpProblem mc = build_matrix_completion(1, 1, {{0, 0, 1.0}});
  CHECK_THROWS_AS(PenaltyConfig{}.resolve(mc), std::invalid_argument);
}
