#include "support.hpp"

#include "sdpr/alloc_audit.hpp"
#include "sdpr/oracle.hpp"
#include "sdpr/recovery.hpp"

#include <doctest.h>

#include <cmath>

using namespace sdpr;
using sdpr::testing::random_orthonormal;
using sdpr::testing::random_symmetric;
using sdpr::testing::to_sparse;
using sdpr::testing::two_node_maxcut;

namespace {

Eigenbasis basis_of(const Matrix& V) {
  Eigenbasis e;
  e.V = V;
  e.ritz_values = Vector::Zero(V.cols());
  e.residual_norms = Vector::Zero(V.cols());
  e.converged = true;
  return e;
}

Eigenbasis two_node_basis() {
  Matrix V(2, 1);
  V << 1.0, -1.0;
  return basis_of(V / std::sqrt(2.0));
}

Vector y_star_2node() { return Vector::Constant(2, -2.0); }

Matrix random_psd(Eigen::Index r, Rng& rng) {
  const Matrix G = random_symmetric(r, rng);
  return G * G;
}

// minimize <C_V, S> s.t. ||A_V(S) - b|| <= delta, S psd, written as a
// standard-form SDP over blockdiag(S, M) with the second-order cone as the
// arrow matrix M = [[delta I, w], [w', delta]], w = A_V(S) - b.
SdpProblem ball_sdp(const CompressedOperators& ops, const Vector& b, double delta) {
  const Eigen::Index r = ops.r();
  const Eigen::Index m = b.size();
  const Eigen::Index n = r + m + 1;
  std::vector<SparseMatrix> mats;
  Vector rhs(m + sym_dim(m + 1));
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < m; ++i) {
    Matrix A = Matrix::Zero(n, n);
    A.topLeftCorner(r, r) = ops.adjoint(Vector::Unit(m, i));
    A(r + i, r + m) = A(r + m, r + i) = -0.5;
    mats.push_back(to_sparse(A));
    rhs(k++) = b(i);
  }
  for (Eigen::Index i = 0; i <= m; ++i) {
    for (Eigen::Index j = i; j <= m; ++j) {
      if (j == m && i < m) continue;  // w entries are set by the linking rows
      Matrix A = Matrix::Zero(n, n);
      A(r + i, r + j) = A(r + j, r + i) = i == j ? 1.0 : 0.5;
      mats.push_back(to_sparse(A));
      rhs(k++) = i == j ? delta : 0.0;
    }
  }
  rhs.conservativeResize(k);
  Matrix C = Matrix::Zero(n, n);
  C.topLeftCorner(r, r) = ops.C_V();
  return SdpProblem(CostOracle::sparse(to_sparse(C)),
                    std::make_shared<GenericSparseMap>(n, std::move(mats)), rhs);
}

}  // namespace

TEST_CASE("compressed operators on the 2-node Max-Cut") {
  const SdpProblem p = two_node_maxcut();
  const CompressedOperators ops = compress(p, two_node_basis());
  CHECK(ops.r() == 1);
  Matrix s(1, 1);
  s << 3.0;
  CHECK((ops.forward(s) - Vector::Constant(2, 1.5)).norm() <= 1e-14);
  Vector y(2);
  y << 1.0, 4.0;
  CHECK(ops.adjoint(y)(0, 0) == doctest::Approx(2.5));
  CHECK(ops.C_V()(0, 0) == doctest::Approx(-2.0));
  CHECK(ops.op_norm() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-10));
  CHECK(ops.sigma_min() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-10));
}

TEST_CASE("coordinate basis with the diagonal map") {
  const SdpProblem p = build_maxcut(3, {{0, 1, 1.0}});
  const CompressedOperators ops = compress(p, basis_of(Matrix::Identity(3, 1)));
  Matrix s(1, 1);
  s << 2.0;
  CHECK((ops.forward(s) - 2.0 * Vector::Unit(3, 0)).norm() <= 1e-15);
  CHECK(ops.sigma_min() == doctest::Approx(1.0));
}

TEST_CASE("compressed adjoint consistency") {
  const auto inst = sdpr::testing::planted_instance(50, 3, 30, 7);
  Rng rng(1);
  const CompressedOperators ops = compress(inst.problem, basis_of(random_orthonormal(50, 4, rng)));
  CHECK((ops.C_V() - ops.C_V().transpose()).norm() <= 1e-12);
  for (int k = 0; k < 10; ++k) {
    const Matrix S = random_symmetric(4, rng);
    const Vector y = random_normal(30, rng);
    const double lhs = ops.forward(S).dot(y);
    const double rhs = S.cwiseProduct(ops.adjoint(y)).sum();
    CHECK(std::abs(lhs - rhs) <= 1e-10 * (1.0 + std::abs(lhs)) * (1.0 + S.norm() * y.norm()));
  }
  Matrix bad = random_orthonormal(50, 2, rng);
  bad.col(1) = bad.col(0);
  CHECK_THROWS_AS(compress(inst.problem, basis_of(bad)), std::invalid_argument);
}

TEST_CASE("MinFeas examples") {
  const SdpProblem p = two_node_maxcut();
  const CompressedOperators ops = compress(p, two_node_basis());
  const CompressedSolution s = solve_minfeas(ops, p.b, {});
  CHECK(s.S(0, 0) == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(s.residual <= 1e-9);
  Matrix X(2, 2);
  X << 1, -1, -1, 1;
  CHECK((dense_primal(s) - X).norm() <= 1e-8);

  const CompressedSolution zero = solve_minfeas(ops, Vector::Zero(2), {});
  CHECK(zero.S.norm() == 0.0);
}

TEST_CASE("property: MinFeas solves planted consistent systems and meets the optimality test") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Eigen::Index r = 1 + static_cast<Eigen::Index>(seed % 3);
    const Eigen::Index m = sym_dim(r) + 4;
    const auto inst = sdpr::testing::planted_instance(12, 2, m, seed);
    Rng rng(seed);
    const CompressedOperators ops =
        compress(inst.problem, basis_of(random_orthonormal(12, r, rng)));
    const Matrix S0 = random_psd(r, rng);
    ApgConfig apg;
    apg.tol = 1e-11;
    const CompressedSolution s = solve_minfeas(ops, ops.forward(S0), apg);
    CHECK(s.residual <= 1e-8);

    // Inconsistent data: check the variational inequality at the solution.
    const Vector b = random_normal(m, rng);
    const CompressedSolution ls = solve_minfeas(ops, b, {});
    const Matrix grad = ops.adjoint(ops.forward(ls.S) - b);
    for (int k = 0; k < 20; ++k) {
      const Matrix P = random_psd(r, rng);
      CHECK(grad.cwiseProduct(P - ls.S).sum() >= -1e-6 * (P - ls.S).norm());
    }
    CHECK(sdpr::testing::dense_lambda_min(ls.S) >= -1e-10 * (1.0 + ls.S.norm()));
  }
}

TEST_CASE("MinFeas warm start has the right shape") {
  const SdpProblem p = two_node_maxcut();
  const CompressedOperators ops = compress(p, two_node_basis());
  const Matrix wrong = Matrix::Identity(2, 2);
  CHECK_THROWS_AS(solve_minfeas(ops, p.b, {}, &wrong), std::invalid_argument);
  Matrix start(1, 1);
  start << 5.0;
  CHECK(solve_minfeas(ops, p.b, {}, &start).S(0, 0) == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("MinObj examples") {
  const SdpProblem p = two_node_maxcut();
  const CompressedOperators ops = compress(p, two_node_basis());
  const CompressedSolution s = solve_minobj(ops, p.b, 0.1 * std::sqrt(2.0), {});
  CHECK(s.S(0, 0) == doctest::Approx(2.2).epsilon(1e-8));
  CHECK(s.objective == doctest::Approx(-4.4).epsilon(1e-8));

  // C_V psd and a ball containing the origin.
  const SdpProblem id(CostOracle::identity(2), std::make_shared<DiagEqualityMap>(2),
                      Vector::Ones(2));
  const CompressedOperators idops = compress(id, two_node_basis());
  const CompressedSolution z = solve_minobj(idops, id.b, 2.0, {});
  CHECK(z.S.norm() <= 1e-9);

  CHECK_THROWS_AS(solve_minobj(ops, Vector::Constant(2, -1.0), 0.1, {}), std::invalid_argument);
  CHECK_THROWS_AS(solve_minobj(ops, p.b, -1.0, {}), std::invalid_argument);
}

TEST_CASE("MinObj matches a dense solve of the cone program") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const auto inst = sdpr::testing::planted_instance(6, 2, 3, seed);
    Rng rng(seed + 30);
    const CompressedOperators ops = compress(inst.problem, basis_of(random_orthonormal(6, 2, rng)));
    const Vector b = ops.forward(random_psd(2, rng)) + 0.2 * random_normal(3, rng);
    const CompressedSolution feas = solve_minfeas(ops, b, {});
    const double delta = feas.residual + 0.3;
    CpConfig cp;
    cp.max_iters = 200000;
    cp.tol = 1e-11;
    const CompressedSolution s = solve_minobj(ops, b, delta, cp, &feas);
    OracleConfig ocfg;
    const DenseSolution ref = solve_dense(ball_sdp(ops, b, delta), ocfg);
    REQUIRE(ref.certified);
    CHECK(s.objective == doctest::Approx(ref.p_star).epsilon(1e-5).scale(1.0));
    CHECK(s.residual <= delta + 1e-8);
  }
}

TEST_CASE("recover on the 2-node Max-Cut") {
  const SdpProblem p = two_node_maxcut();
  RecoveryConfig cfg;
  cfg.r = 1;
  EigensolverConfig eig;
  eig.tol = 1e-12;
  Matrix X(2, 2);
  X << 1, -1, -1, 1;
  const RecoveryOutcome one = recover(p, y_star_2node(), 1, cfg, eig);
  CHECK_FALSE(one.minobj);
  CHECK((dense_primal(one.final_solution()) - X).norm() <= 1e-8);

  const RecoveryOutcome two = recover(p, y_star_2node(), 2, cfg, eig);
  REQUIRE(two.minobj);
  CHECK(two.minobj->delta <= 1.1 * two.minfeas.residual + 1e-15);
  CHECK(two.minobj->S(0, 0) == doctest::Approx(2.0).epsilon(1e-8));

  CHECK_THROWS_AS(recover(p, y_star_2node(), 3, cfg, eig), std::invalid_argument);
  cfg.gamma = 0.5;
  CHECK_THROWS_AS(recover(p, y_star_2node(), 1, cfg, eig), std::invalid_argument);
}

TEST_CASE("property: MinObj stays in the ball and never loses to MinFeas") {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    const auto inst = sdpr::testing::planted_instance(10, 2, 8, seed);
    Rng rng(seed);
    const Vector y = inst.y_star + 1e-2 * random_normal(8, rng);
    RecoveryConfig cfg;
    cfg.r = 2 + static_cast<Eigen::Index>(seed % 2);
    const RecoveryOutcome out = recover(inst.problem, y, 2, cfg, {});
    REQUIRE(out.minobj);
    const double tol = cfg.cp.tol;
    CHECK(out.minobj->residual <= out.minobj->delta + 10 * tol);
    CHECK(out.minobj->objective <= out.minfeas.objective + 10 * tol);
    CHECK(out.minobj->delta == doctest::Approx(cfg.gamma * out.minfeas.residual));
  }
}

TEST_CASE("default rank and configuration checks") {
  CHECK(default_rank(100, 100, 50) == 13);
  CHECK(default_rank(100, 100, 5) == 5);
  CHECK(default_rank(4, 100, 50) == 3);
  CHECK(default_rank(100, 1, 50) == 1);
  RecoveryConfig cfg;
  cfg.r = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.r = 2;
  cfg.cp.theta = 1.5;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("recover respects the storage contract") {
  const Eigen::Index n = 1500;
  const SdpProblem p = build_maxcut(n, random_graph(n, 0.004, 6));
  const Vector y = -Vector::Constant(n, 8.0);
  RecoveryConfig cfg;
  cfg.r = 5;
  EigensolverConfig eig;
  audit::set_enabled(true);
  audit::reset();
  const RecoveryOutcome out = recover(p, y, 2, cfg, eig);
  const std::size_t peak = audit::peak_doubles();
  audit::set_enabled(false);
  const auto bound = 8 * static_cast<std::size_t>(n + n * eig.lanczos_dim(n, cfg.r) + 25);
  CHECK(peak <= bound);
  CHECK(peak < static_cast<std::size_t>(n * n / 10));
  CHECK(out.minobj);
}
