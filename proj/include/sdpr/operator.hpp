#pragma once

#include "sdpr/linalg.hpp"

namespace sdpr {

// A symmetric linear map on R^n that is only available through its action.
class SymmetricOperator {
 public:
  virtual ~SymmetricOperator() = default;
  virtual Eigen::Index dim() const = 0;
  // out = Op * in. `out` is resized by the caller.
  virtual void apply(const Vector& in, Vector& out) const = 0;

  Vector operator*(const Vector& in) const {
    Vector out(dim());
    apply(in, out);
    return out;
  }
};

// Wraps an explicit dense or sparse symmetric matrix. Used by tests and by
// callers that already hold a materialized matrix.
template <typename MatrixType>
class MatrixOperator final : public SymmetricOperator {
 public:
  explicit MatrixOperator(const MatrixType& m) : m_(m) {}
  Eigen::Index dim() const override { return m_.rows(); }
  void apply(const Vector& in, Vector& out) const override { out.noalias() = m_ * in; }

 private:
  const MatrixType& m_;
};

}  // namespace sdpr
