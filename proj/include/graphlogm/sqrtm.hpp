#pragma once

#include "graphlogm/matrix.hpp"

namespace graphlogm {

/// Iterate of the coupled Denman–Beavers iteration: X -> A^{1/2}, Y -> A^{-1/2}.
template <Scalar T>
struct DbState {
  Matrix<T> x;
  Matrix<T> y;
  int iter = 0;
  double mu = 1.0;  ///< Scaling factor used in the last step.
};

struct SqrtOptions {
  double tol = 0.0;  ///< Relative-change tolerance; 0 selects n * 10u.
  int maxiter = 50;
  double scaling_off = 1e-2;  ///< Determinant scaling stops below this relative change.
};

/// Principal square root by the determinant-scaled Denman–Beavers iteration.
/// Two divisions per iteration. Throws SingularMatrixError or ConvergenceError.
template <Scalar T>
DbState<T> sqrt_db_state(const Matrix<T>& a, const SqrtOptions& opts, OpCounter& counter);

template <Scalar T>
Matrix<T> sqrt_db(const Matrix<T>& a, double tol, int maxiter, OpCounter& counter) {
  return sqrt_db_state(a, SqrtOptions{tol, maxiter}, counter).x;
}

}  // namespace graphlogm
