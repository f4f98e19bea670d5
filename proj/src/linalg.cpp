#include "sdpr/linalg.hpp"

#include <cmath>

namespace sdpr {

Vector random_normal(Eigen::Index n, Rng& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = dist(rng);
  return v;
}

Vector random_unit(Eigen::Index n, Rng& rng) {
  Vector v = random_normal(n, rng);
  const double nrm = v.norm();
  if (nrm == 0.0) {
    v.setZero();
    v(0) = 1.0;
    return v;
  }
  return v / nrm;
}

Vector svec(const Matrix& S) {
  const Eigen::Index r = S.rows();
  Vector s(sym_dim(r));
  const double root2 = std::sqrt(2.0);
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < r; ++j) {
    s(k++) = S(j, j);
    for (Eigen::Index i = j + 1; i < r; ++i) {
      s(k++) = root2 * 0.5 * (S(i, j) + S(j, i));
    }
  }
  return s;
}

Matrix smat(const Vector& s, Eigen::Index r) {
  Matrix S(r, r);
  const double inv_root2 = 1.0 / std::sqrt(2.0);
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < r; ++j) {
    S(j, j) = s(k++);
    for (Eigen::Index i = j + 1; i < r; ++i) {
      S(i, j) = S(j, i) = inv_root2 * s(k++);
    }
  }
  return S;
}

Matrix sym_basis(Eigen::Index r, Eigen::Index k) {
  Vector e = Vector::Zero(sym_dim(r));
  e(k) = 1.0;
  return smat(e, r);
}

int numerical_rank(const Matrix& S, double rel_tol) {
  if (S.size() == 0) return 0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(S), Eigen::EigenvaluesOnly);
  const Vector ev = es.eigenvalues().cwiseAbs();
  const double top = ev.maxCoeff();
  if (top == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) > rel_tol * top) ++rank;
  }
  return rank;
}

double nuclear_norm_sym(const Matrix& S) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(S), Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

double op_norm_sym(const Matrix& S) {
  if (S.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(S), Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace sdpr
