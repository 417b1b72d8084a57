#pragma once

#include <vector>

#include "graphlogm/matrix.hpp"

namespace graphlogm {

inline constexpr std::size_t kEigDefaultCap = 512;

/// Eigenvalues by Hessenberg reduction and shifted QR. Validation grade only.
/// Throws ArgumentError above `cap`, ConvergenceError if QR stalls.
template <Scalar T>
std::vector<cplx> eig_small(const Matrix<T>& a, std::size_t cap = kEigDefaultCap);

/// True if some eigenvalue lies on the closed negative real axis (zero included),
/// judged with a relative tolerance on the imaginary part.
bool touches_negative_axis(const std::vector<cplx>& eigenvalues, double scale);

}  // namespace graphlogm
