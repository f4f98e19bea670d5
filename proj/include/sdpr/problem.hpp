#pragma once

// Standard-form SDP data model:
//
//   minimize tr(C X)  subject to  A(X) = b,  X psd,
//
// where C and A are only reachable through three oracles:
//   u      -> C u
//   (u, v) -> A((u v' + v u') / 2)
//   (y, u) -> (A'y) u
//
// No type in this header ever stores an n x n dense matrix.

#include "sdpr/linalg.hpp"
#include "sdpr/operator.hpp"

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sdpr {

enum class CostKind { SparseSymmetric, NegatedLaplacian, Identity };

class CostOracle {
 public:
  // C given explicitly as a sparse symmetric matrix.
  static CostOracle sparse(SparseMatrix c);
  // C = -(D - W) for a symmetric nonnegative weight matrix W with zero diagonal.
  static CostOracle negated_laplacian(SparseMatrix weights);
  static CostOracle identity(Eigen::Index n);

  Eigen::Index n() const { return n_; }
  CostKind kind() const { return kind_; }

  void apply(const Vector& u, Vector& out) const;
  Vector apply(const Vector& u) const;

  double frobenius_norm() const;

  // The explicit sparse matrix behind SparseSymmetric (C) and NegatedLaplacian (W).
  const SparseMatrix& matrix() const { return mat_; }

 private:
  CostOracle(CostKind kind, Eigen::Index n) : kind_(kind), n_(n) {}

  CostKind kind_;
  Eigen::Index n_;
  SparseMatrix mat_;
  Vector degree_;
};

// The linear map A : Sym^n -> R^m.
class ConstraintMap {
 public:
  virtual ~ConstraintMap() = default;

  virtual Eigen::Index n() const = 0;
  virtual Eigen::Index m() const = 0;
  virtual std::string_view name() const = 0;

  // out += scale * A((u v' + v u') / 2)
  virtual void add_forward_rank1(double scale, const Vector& u, const Vector& v,
                                 Vector& out) const = 0;
  // out = (A'y) u
  virtual void adjoint_apply(const Vector& y, const Vector& u, Vector& out) const = 0;
  // A(A'y). Structured maps answer in closed form.
  virtual Vector gram_apply(const Vector& y) const = 0;

  Vector forward_rank1(const Vector& u, const Vector& v) const;
  Vector adjoint_apply(const Vector& y, const Vector& u) const;
};

// A(X) = diag(X); m = n.
class DiagEqualityMap final : public ConstraintMap {
 public:
  explicit DiagEqualityMap(Eigen::Index n);
  Eigen::Index n() const override { return n_; }
  Eigen::Index m() const override { return n_; }
  std::string_view name() const override { return "diag-equality"; }
  void add_forward_rank1(double scale, const Vector& u, const Vector& v,
                         Vector& out) const override;
  void adjoint_apply(const Vector& y, const Vector& u, Vector& out) const override;
  Vector gram_apply(const Vector& y) const override { return y; }

 private:
  Eigen::Index n_;
};

// Observed entries of the off-diagonal block of a lifted (n1+n2)-square
// matrix: A_k = (E_{ab} + E_{ba}) / 2 with a = row_k < n1 <= b = n1 + col_k.
class EntryObservationMap final : public ConstraintMap {
 public:
  struct Entry {
    Eigen::Index row;  // 0-based, < n1
    Eigen::Index col;  // 0-based, < n2
  };

  EntryObservationMap(Eigen::Index n1, Eigen::Index n2, std::vector<Entry> entries);

  Eigen::Index n() const override { return n1_ + n2_; }
  Eigen::Index m() const override { return static_cast<Eigen::Index>(entries_.size()); }
  std::string_view name() const override { return "entry-observation"; }
  void add_forward_rank1(double scale, const Vector& u, const Vector& v,
                         Vector& out) const override;
  void adjoint_apply(const Vector& y, const Vector& u, Vector& out) const override;
  Vector gram_apply(const Vector& y) const override { return 0.5 * y; }

  Eigen::Index n1() const { return n1_; }
  Eigen::Index n2() const { return n2_; }
  const std::vector<Entry>& entries() const { return entries_; }

 private:
  Eigen::Index n1_;
  Eigen::Index n2_;
  std::vector<Entry> entries_;
};

// m explicit sparse symmetric matrices A_i.
class GenericSparseMap final : public ConstraintMap {
 public:
  enum class Validation { Strict, None };

  // Strict validation rejects asymmetric or wrongly sized matrices. None is
  // for fault-injection tests of the adjoint check.
  GenericSparseMap(Eigen::Index n, std::vector<SparseMatrix> mats,
                   Validation validation = Validation::Strict);

  Eigen::Index n() const override { return n_; }
  Eigen::Index m() const override { return static_cast<Eigen::Index>(mats_.size()); }
  std::string_view name() const override { return "generic-sparse"; }
  void add_forward_rank1(double scale, const Vector& u, const Vector& v,
                         Vector& out) const override;
  void adjoint_apply(const Vector& y, const Vector& u, Vector& out) const override;
  // Forms sum_i y_i A_i as a sparse matrix; refuses n > kMaxGramDim.
  Vector gram_apply(const Vector& y) const override;

  const std::vector<SparseMatrix>& matrices() const { return mats_; }

  static constexpr Eigen::Index kMaxGramDim = 2000;

 private:
  Eigen::Index n_;
  std::vector<SparseMatrix> mats_;
};

struct SdpProblem {
  SdpProblem(CostOracle cost, std::shared_ptr<const ConstraintMap> constraints, Vector b,
             std::optional<double> trace_hint = std::nullopt);

  Eigen::Index n() const { return cost.n(); }
  Eigen::Index m() const { return constraints->m(); }

  CostOracle cost;
  std::shared_ptr<const ConstraintMap> constraints;
  Vector b;
  std::optional<double> trace_hint;
};

// Z(y) = sign * (C - A'y), applied matrix-free.
class SlackOperator final : public SymmetricOperator {
 public:
  SlackOperator(const SdpProblem& problem, Vector y, double sign = 1.0);

  Eigen::Index dim() const override { return problem_->n(); }
  void apply(const Vector& u, Vector& out) const override;

  const Vector& y() const { return y_; }
  double sign() const { return sign_; }

 private:
  const SdpProblem* problem_;
  Vector y_;
  double sign_;
  mutable Vector scratch_;
};

struct WeightedEdge {
  Eigen::Index i;  // 0-based
  Eigen::Index j;  // 0-based
  double w = 1.0;
};

// Max-Cut relaxation: minimize tr(-L X) s.t. diag(X) = 1.
SdpProblem build_maxcut(Eigen::Index n, const std::vector<WeightedEdge>& edges);

struct Observation {
  Eigen::Index i;  // 0-based row, < n1
  Eigen::Index j;  // 0-based column, < n2
  double value;
};

// Nuclear-norm matrix completion lifted to an (n1+n2)-square SDP with
// identity cost. trace_hint is left unset.
SdpProblem build_matrix_completion(Eigen::Index n1, Eigen::Index n2,
                                   const std::vector<Observation>& observations);

// Erdos-Renyi graph G(n, p) with unit weights.
std::vector<WeightedEdge> random_graph(Eigen::Index n, double edge_prob, std::uint64_t seed);

struct SyntheticCompletion {
  SdpProblem problem;
  Matrix left;    // n1 x rank sign matrix
  Matrix right;   // rank x n2 sign matrix
  double nuclear_norm;  // of left * right
};

// Rank-`rank` product of random sign matrices, observed at `num_obs`
// uniformly random distinct positions (capped at n1 * n2).
SyntheticCompletion synthetic_matrix_completion(Eigen::Index n1, Eigen::Index n2,
                                                Eigen::Index rank, Eigen::Index num_obs,
                                                std::uint64_t seed);

// Default observation count 25 (n1 + n2) ln(n1 + n2), capped at n1 * n2.
Eigen::Index default_observation_count(Eigen::Index n1, Eigen::Index n2);

struct AdjointReport {
  int probes = 0;
  double max_adjoint_violation = 0.0;   // relative
  double max_symmetry_violation = 0.0;  // relative, cost oracle
  double max_linearity_violation = 0.0; // relative, cost oracle
  bool passed = false;
};

// Randomized checks that the constraint map and its adjoint agree, and that
// the cost oracle is linear and symmetric. Passes when every relative
// violation is at most `tol`.
AdjointReport adjoint_consistency_check(const SdpProblem& problem, int probes,
                                        std::uint64_t seed = 7, double tol = 1e-10);

// Dense materializations for small-n reference code. These allocate n x n
// buffers and are never called by the matrix-free solvers.
Matrix dense_cost(const SdpProblem& problem);
std::vector<Matrix> dense_constraints(const SdpProblem& problem);
Matrix dense_adjoint(const SdpProblem& problem, const Vector& y);
Vector dense_forward(const SdpProblem& problem, const Matrix& X);

}  // namespace sdpr
