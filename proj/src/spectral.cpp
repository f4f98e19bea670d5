#include "sdpr/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sdpr {

int EigensolverConfig::lanczos_dim(Eigen::Index n, Eigen::Index r) const {
  if (!(tol > 0.0)) throw std::invalid_argument("eigensolver tol must be positive");
  if (restarts < 0) throw std::invalid_argument("eigensolver restarts must be >= 0");
  if (n < 1 || r < 1) throw std::invalid_argument("eigensolver needs n >= 1 and r >= 1");
  Eigen::Index dim = max_lanczos_dim > 0 ? max_lanczos_dim
                                         : std::max<Eigen::Index>(4 * r + 20, 100);
  dim = std::min(dim, n);
  if (dim < std::min(n, r + 2)) {
    throw std::invalid_argument("max_lanczos_dim must be at least r + 2");
  }
  return static_cast<int>(dim);
}

namespace {

struct KrylovResult {
  Matrix vectors;
  Vector values;
  Vector residuals;
  bool converged = false;
  int matvecs = 0;
  int restarts = 0;
};

// Subtracts the projection of w onto the first `cols` columns of Q, twice.
// Returns the accumulated coefficients.
Vector orthogonalize(const Matrix& Q, Eigen::Index cols, Vector& w) {
  Vector h = Q.leftCols(cols).transpose() * w;
  w.noalias() -= Q.leftCols(cols) * h;
  const Vector h2 = Q.leftCols(cols).transpose() * w;
  w.noalias() -= Q.leftCols(cols) * h2;
  h += h2;
  return h;
}

// Krylov-Schur form of thick-restart Lanczos for the `nev` smallest
// eigenpairs. Q holds p + 1 basis vectors and H = Q' A Q is kept dense, so
// after a restart the arrowhead coupling needs no special handling.
KrylovResult krylov_schur(const SymmetricOperator& op, Eigen::Index nev, Eigen::Index p,
                          const EigensolverConfig& cfg, const Vector* warm) {
  const Eigen::Index n = op.dim();
  Rng rng(cfg.seed);
  KrylovResult out;

  Matrix Q(n, p + 1);
  Matrix H = Matrix::Zero(p, p);
  if (warm != nullptr && warm->size() == n && warm->norm() > 0.0) {
    Q.col(0) = *warm / warm->norm();
  } else {
    Q.col(0) = random_unit(n, rng);
  }

  Vector q(n);
  Vector w(n);
  Eigen::Index kept = 0;
  double scale = 0.0;

  for (int restart = 0;; ++restart) {
    double beta = 0.0;
    for (Eigen::Index j = kept; j < p; ++j) {
      q = Q.col(j);
      op.apply(q, w);
      ++out.matvecs;
      scale = std::max(scale, w.norm());
      const Vector h = orthogonalize(Q, j + 1, w);
      H.col(j).head(j + 1) = h;
      H.row(j).head(j + 1) = h.transpose();
      beta = w.norm();
      const bool breakdown = beta <= 1e-13 * scale;
      if (breakdown) beta = 0.0;
      if (!breakdown) {
        Q.col(j + 1) = w / beta;
        continue;
      }
      // Invariant subspace: continue from a fresh direction.
      if (j + 1 == n) {
        Q.col(j + 1).setZero();
        continue;
      }
      Vector fresh = random_unit(n, rng);
      orthogonalize(Q, j + 1, fresh);
      Q.col(j + 1) = fresh / fresh.norm();
    }

    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(H));
    const Vector& theta = es.eigenvalues();
    const Matrix& Y = es.eigenvectors();
    Vector res(p);
    for (Eigen::Index i = 0; i < p; ++i) res(i) = beta * std::abs(Y(p - 1, i));

    bool all = true;
    for (Eigen::Index i = 0; i < nev; ++i) {
      if (res(i) > cfg.tol * std::max(1.0, std::abs(theta(i)))) all = false;
    }
    // With p == n the basis spans everything, so the Ritz pairs are exact
    // up to rounding even if the last residual did not vanish.
    const bool full = p == n;
    if (all || full || restart >= cfg.restarts) {
      out.vectors = Q.leftCols(p) * Y.leftCols(nev);
      out.values = theta.head(nev);
      out.residuals = res.head(nev);
      if (full) out.residuals.setZero();
      out.converged = all || full;
      out.restarts = restart;
      return out;
    }

    const Eigen::Index l = std::min(p - 1, nev + (p - nev) / 2);
    const Matrix kept_vectors = Q.leftCols(p) * Y.leftCols(l);
    Q.leftCols(l) = kept_vectors;
    Q.col(l) = Q.col(p);
    H.setZero();
    H.diagonal().head(l) = theta.head(l);
    const Vector coupling = beta * Y.row(p - 1).head(l).transpose();
    H.col(l).head(l) = coupling;
    H.row(l).head(l) = coupling.transpose();
    kept = l;
  }
}

}  // namespace

EigenPair min_eigpair(const SymmetricOperator& op, const EigensolverConfig& cfg,
                      const Vector* warm_start) {
  const Eigen::Index n = op.dim();
  const int p = cfg.lanczos_dim(n, 1);
  KrylovResult kr = krylov_schur(op, 1, p, cfg, warm_start);
  EigenPair out;
  out.value = kr.values(0);
  out.vector = kr.vectors.col(0);
  out.vector.normalize();
  out.residual = kr.residuals(0);
  out.converged = kr.converged;
  out.matvecs = kr.matvecs;
  return out;
}

Eigenbasis smallest_subspace(const SymmetricOperator& op, Eigen::Index r,
                             const EigensolverConfig& cfg, const Vector* warm_start) {
  const Eigen::Index n = op.dim();
  if (r < 1 || r >= n) throw std::invalid_argument("smallest_subspace needs 1 <= r < n");
  const int p = cfg.lanczos_dim(n, r);
  const Eigen::Index nev = r + 1;
  KrylovResult kr = krylov_schur(op, nev, p, cfg, warm_start);

  Eigenbasis out;
  out.V = kr.vectors.leftCols(r);
  out.ritz_values = kr.values.head(r);
  out.residual_norms = kr.residuals.head(r);
  out.threshold = kr.values(r);
  out.converged = kr.converged;
  out.clustered = std::abs(kr.values(r) - kr.values(r - 1)) <= 1e-10;
  out.matvecs = kr.matvecs;
  out.restarts = kr.restarts;
  return out;
}

double operator_norm_Amap(const SdpProblem& problem, int iters, std::uint64_t seed) {
  if (iters < 1) throw std::invalid_argument("operator_norm_Amap needs iters >= 1");
  Rng rng(seed);
  Vector y = random_unit(problem.m(), rng);
  double best = 0.0;
  for (int it = 0; it < iters; ++it) {
    const Vector gy = problem.constraints->gram_apply(y);
    best = std::max(best, y.dot(gy));
    const double nrm = gy.norm();
    if (nrm == 0.0) break;
    y = gy / nrm;
  }
  return std::sqrt(best);
}

Matrix project_psd(const Matrix& S) {
  if (!S.allFinite()) throw std::invalid_argument("project_psd: non-finite input");
  if (S.size() == 0) return S;
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(S));
  const Vector lam = es.eigenvalues().cwiseMax(0.0);
  const Matrix& U = es.eigenvectors();
  return symmetrize(U * lam.asDiagonal() * U.transpose());
}

Vector project_ball(const Vector& v, double delta) {
  if (!(delta >= 0.0)) throw std::invalid_argument("project_ball: delta must be >= 0");
  const double nrm = v.norm();
  if (nrm <= delta) return v;
  return v * (delta / nrm);
}

}  // namespace sdpr
