#pragma once

#include <vector>

#include "graphlogm/matrix.hpp"

namespace graphlogm {

/// Diagonal similarity T = diag(scale) with radix-power entries; B = T^{-1} A T.
///
/// No permutation phase is applied, so `permutation` is always the identity.
struct BalanceTransform {
  std::vector<double> scale;
  std::vector<std::size_t> permutation;

  bool is_identity() const;
};

template <Scalar T>
struct Balanced {
  Matrix<T> matrix;
  BalanceTransform transform;
};

/// Iterative radix-2 row/column norm balancing.
template <Scalar T>
Balanced<T> balance(const Matrix<T>& a);

/// Reverts the similarity: returns T L T^{-1}.
template <Scalar T>
Matrix<T> unbalance(const Matrix<T>& l, const BalanceTransform& t);

}  // namespace graphlogm
