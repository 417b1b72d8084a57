#pragma once

#include "graphlogm/matrix.hpp"

namespace graphlogm {

/// Lower estimate of ||B^p||_1 by a two-column block 1-norm estimator.
///
/// B^p is never formed. Each application of B or B^* to the n x 2 block is
/// charged to counter.estimation_products. Exact for diagonal B.
template <Scalar T>
double est_power_norm(const Matrix<T>& b, int p, OpCounter& counter);

/// Lower estimate of ||B^p C||_1, used for odd powers built from a square.
template <Scalar T>
double est_power_norm(const Matrix<T>& b, int p, const Matrix<T>& c, OpCounter& counter);

}  // namespace graphlogm
