#include "graphlogm/sqrtm.hpp"

#include <limits>

#include "graphlogm/lu.hpp"

namespace graphlogm {

template <Scalar T>
DbState<T> sqrt_db_state(const Matrix<T>& a, const SqrtOptions& opts, OpCounter& counter) {
  const std::size_t n = a.size();
  if (n == 0) throw ArgumentError("sqrt_db: empty matrix");
  if (opts.maxiter < 1) throw ArgumentError("sqrt_db: maxiter must be >= 1");
  const double tol = opts.tol > 0.0 ? opts.tol : static_cast<double>(n) * 10.0 * kUnitRoundoff;

  DbState<T> st{a, Matrix<T>::identity(n), 0, 1.0};
  bool scaling = true;
  double prev_rel = std::numeric_limits<double>::infinity();
  while (true) {
    if (st.iter >= opts.maxiter) throw ConvergenceError("sqrt_db: no convergence within maxiter");
    const LuFactor<T> fx(st.x);
    const LuFactor<T> fy(st.y);
    double mu = 1.0;
    if (scaling) {
      // mu = |det X det Y|^{-1/(2n)}, formed from log-determinants to avoid overflow.
      const double logdet = fx.log_abs_determinant() + fy.log_abs_determinant();
      mu = std::exp(-logdet / (2.0 * static_cast<double>(n)));
      mu = std::clamp(mu, 1e-8, 1e8);
    }
    const Matrix<T> xinv = fx.inverse(counter);
    const Matrix<T> yinv = fy.inverse(counter);
    Matrix<T> xn = T(0.5 * mu) * st.x;
    xn.axpy(T(0.5 / mu), yinv);
    Matrix<T> yn = T(0.5 * mu) * st.y;
    yn.axpy(T(0.5 / mu), xinv);
    if (!xn.all_finite() || !yn.all_finite()) throw ConvergenceError("sqrt_db: iterate overflowed");

    const double rel = onenorm(Matrix<T>(xn - st.x)) / onenorm(xn);
    st.x = std::move(xn);
    st.y = std::move(yn);
    st.mu = mu;
    ++st.iter;
    if (rel <= tol) break;
    // Rounding floor reached: the change stopped shrinking quadratically.
    if (prev_rel < 1e-6 && rel > 0.5 * prev_rel) break;
    if (rel < opts.scaling_off) scaling = false;
    prev_rel = rel;
  }
  return st;
}

template DbState<double> sqrt_db_state(const Matrix<double>&, const SqrtOptions&, OpCounter&);
template DbState<cplx> sqrt_db_state(const Matrix<cplx>&, const SqrtOptions&, OpCounter&);

}  // namespace graphlogm
