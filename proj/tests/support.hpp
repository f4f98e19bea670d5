#pragma once

// Shared fixtures for the unit and acceptance tests.

#include "sdpr/linalg.hpp"
#include "sdpr/problem.hpp"

#include <Eigen/Dense>

#include <memory>
#include <vector>

namespace sdpr::testing {

inline SdpProblem two_node_maxcut() { return build_maxcut(2, {{0, 1, 1.0}}); }

inline double dense_lambda_min(const Matrix& S) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(S), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

inline Matrix dense_slack(const SdpProblem& p, const Vector& y) {
  return dense_cost(p) - dense_adjoint(p, y);
}

inline SparseMatrix to_sparse(const Matrix& M) {
  SparseMatrix s = M.sparseView();
  s.makeCompressed();
  return s;
}

inline Matrix random_symmetric(Eigen::Index n, Rng& rng) {
  Matrix G(n, n);
  for (Eigen::Index j = 0; j < n; ++j) G.col(j) = random_normal(n, rng);
  return symmetrize(G);
}

inline Matrix random_orthonormal(Eigen::Index n, Eigen::Index k, Rng& rng) {
  Matrix G(n, k);
  for (Eigen::Index j = 0; j < k; ++j) G.col(j) = random_normal(n, rng);
  Eigen::HouseholderQR<Matrix> qr(G);
  return qr.householderQ() * Matrix::Identity(n, k);
}

// A strictly complementary instance with a planted unique solution pair:
// X* = Q1 D1 Q1' (rank k), Z* = Q2 D2 Q2' (rank n - k), A_0 = I and m - 1
// Gaussian constraints, b = A(X*), C = Z* + A'y*. With A_0 = I the point
// y* - e_0 is strictly dual feasible.
struct PlantedInstance {
  SdpProblem problem;
  Matrix X_star;
  Vector y_star;
  Vector strict_anchor;
};

inline PlantedInstance planted_instance(Eigen::Index n, Eigen::Index k, Eigen::Index m,
                                        std::uint64_t seed) {
  Rng rng(seed);
  const Matrix Q = random_orthonormal(n, n, rng);
  std::uniform_real_distribution<double> unif(0.5, 2.0);
  Matrix X = Matrix::Zero(n, n);
  Matrix Z = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < k; ++i) X += unif(rng) * Q.col(i) * Q.col(i).transpose();
  for (Eigen::Index i = k; i < n; ++i) Z += unif(rng) * Q.col(i) * Q.col(i).transpose();

  std::vector<Matrix> dense{Matrix::Identity(n, n)};
  for (Eigen::Index i = 1; i < m; ++i) dense.push_back(random_symmetric(n, rng));
  Vector y = random_normal(m, rng);
  Matrix C = Z;
  Vector b(m);
  std::vector<SparseMatrix> mats;
  for (Eigen::Index i = 0; i < m; ++i) {
    const Matrix& A = dense[static_cast<std::size_t>(i)];
    C += y(i) * A;
    b(i) = A.cwiseProduct(X).sum();
    mats.push_back(to_sparse(A));
  }
  C = symmetrize(C);
  SdpProblem p(CostOracle::sparse(to_sparse(C)),
               std::make_shared<GenericSparseMap>(n, std::move(mats)), b, X.trace());
  Vector anchor = y;
  anchor(0) -= 1.0;
  return {std::move(p), X, y, anchor};
}

// minimize tr(C X) s.t. A(X) = b, tr(X) + s = alpha over blockdiag(X, s)
// psd. The y-block of its dual solution minimizes the penalized dual
// g_alpha, and the last dual entry equals -max(-lambda_min(Z(y)), 0).
inline SdpProblem trace_bounded_epigraph(const SdpProblem& p, double alpha) {
  const Eigen::Index n = p.n();
  const std::vector<Matrix> dense = dense_constraints(p);
  auto lift = [n](const Matrix& A, double corner) {
    Matrix L = Matrix::Zero(n + 1, n + 1);
    L.topLeftCorner(n, n) = A;
    L(n, n) = corner;
    return to_sparse(L);
  };
  std::vector<SparseMatrix> mats;
  for (const Matrix& A : dense) mats.push_back(lift(A, 0.0));
  mats.push_back(lift(Matrix::Identity(n, n), 1.0));
  Vector b(p.m() + 1);
  b.head(p.m()) = p.b;
  b(p.m()) = alpha;
  return SdpProblem(CostOracle::sparse(lift(dense_cost(p), 0.0)),
                    std::make_shared<GenericSparseMap>(n + 1, std::move(mats)), b, alpha);
}

}  // namespace sdpr::testing
