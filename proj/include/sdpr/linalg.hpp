#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cstdint>
#include <random>

namespace sdpr {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<double>;

// Seeded generator used by every randomized routine in the library.
using Rng = std::mt19937_64;

Vector random_normal(Eigen::Index n, Rng& rng);
Vector random_unit(Eigen::Index n, Rng& rng);

// Dimension of Sym^r.
inline Eigen::Index sym_dim(Eigen::Index r) { return r * (r + 1) / 2; }

// Isometry Sym^r -> R^{r(r+1)/2}: diagonal entries as is, off-diagonal
// entries scaled by sqrt(2), so <A, B> = svec(A).dot(svec(B)).
Vector svec(const Matrix& S);
Matrix smat(const Vector& s, Eigen::Index r);

// k-th element of the orthonormal basis of Sym^r matching svec ordering.
Matrix sym_basis(Eigen::Index r, Eigen::Index k);

inline Matrix symmetrize(const Matrix& S) { return 0.5 * (S + S.transpose()); }

// Numerical rank: number of |eigenvalues| above rel_tol * max |eigenvalue|.
int numerical_rank(const Matrix& S, double rel_tol = 1e-7);

double nuclear_norm_sym(const Matrix& S);
double op_norm_sym(const Matrix& S);

}  // namespace sdpr
