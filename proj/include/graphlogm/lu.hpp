#pragma once

#include <vector>

#include "graphlogm/matrix.hpp"

namespace graphlogm {

/// LU factorization with partial pivoting, PA = LU, factors packed in one matrix.
template <Scalar T>
class LuFactor {
 public:
  /// Throws SingularMatrixError on an exactly zero pivot.
  explicit LuFactor(Matrix<T> a);

  std::size_t size() const noexcept { return lu_.size(); }
  const Matrix<T>& packed() const noexcept { return lu_; }
  const std::vector<std::size_t>& permutation() const noexcept { return perm_; }

  T determinant() const;
  /// log|det A|, free of overflow for large n.
  double log_abs_determinant() const;

  /// Solves AX = B. Charges one D per call.
  Matrix<T> solve(const Matrix<T>& b, OpCounter& counter) const;
  /// A^{-1}. Charges one D.
  Matrix<T> inverse(OpCounter& counter) const;

 private:
  Matrix<T> solve_uncounted(const Matrix<T>& b) const;

  Matrix<T> lu_;
  std::vector<std::size_t> perm_;
  int sign_ = 1;
};

template <Scalar T>
LuFactor<T> lu_factor(const Matrix<T>& a) {
  return LuFactor<T>(a);
}

}  // namespace graphlogm
