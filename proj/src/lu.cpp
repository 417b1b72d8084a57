#include "graphlogm/lu.hpp"

#include <cmath>
#include <numeric>

namespace graphlogm {

template <Scalar T>
LuFactor<T>::LuFactor(Matrix<T> a) : lu_(std::move(a)), perm_(lu_.size()) {
  const std::size_t n = lu_.size();
  std::iota(perm_.begin(), perm_.end(), std::size_t{0});
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::abs(lu_(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double v = std::abs(lu_(i, k));
      if (v > best) {
        best = v;
        p = i;
      }
    }
    if (best == 0.0) throw SingularMatrixError("lu_factor: matrix is singular (zero pivot)");
    if (p != k) {
      std::swap_ranges(lu_.row(k).begin(), lu_.row(k).end(), lu_.row(p).begin());
      std::swap(perm_[k], perm_[p]);
      sign_ = -sign_;
    }
    const T pivot = lu_(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const T l = lu_(i, k) / pivot;
      lu_(i, k) = l;
      if (l == T(0)) continue;
      auto ri = lu_.row(i);
      const auto rk = lu_.row(k);
      for (std::size_t j = k + 1; j < n; ++j) ri[j] -= l * rk[j];
    }
  }
}

template <Scalar T>
T LuFactor<T>::determinant() const {
  T d = T(sign_);
  for (std::size_t i = 0; i < lu_.size(); ++i) d *= lu_(i, i);
  return d;
}

template <Scalar T>
double LuFactor<T>::log_abs_determinant() const {
  double s = 0.0;
  for (std::size_t i = 0; i < lu_.size(); ++i) s += std::log(std::abs(lu_(i, i)));
  return s;
}

template <Scalar T>
Matrix<T> LuFactor<T>::solve_uncounted(const Matrix<T>& b) const {
  const std::size_t n = lu_.size();
  if (b.size() != n) throw DimensionError("lu solve: dimension mismatch");
  Matrix<T> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto src = b.row(perm_[i]);
    std::copy(src.begin(), src.end(), x.row(i).begin());
  }
  // Forward substitution with unit lower triangle.
  for (std::size_t i = 0; i < n; ++i) {
    auto xi = x.row(i);
    for (std::size_t k = 0; k < i; ++k) {
      const T l = lu_(i, k);
      if (l == T(0)) continue;
      const auto xk = x.row(k);
      for (std::size_t j = 0; j < n; ++j) xi[j] -= l * xk[j];
    }
  }
  for (std::size_t ii = n; ii-- > 0;) {
    auto xi = x.row(ii);
    for (std::size_t k = ii + 1; k < n; ++k) {
      const T u = lu_(ii, k);
      if (u == T(0)) continue;
      const auto xk = x.row(k);
      for (std::size_t j = 0; j < n; ++j) xi[j] -= u * xk[j];
    }
    const T d = lu_(ii, ii);
    for (std::size_t j = 0; j < n; ++j) xi[j] /= d;
  }
  return x;
}

template <Scalar T>
Matrix<T> LuFactor<T>::solve(const Matrix<T>& b, OpCounter& counter) const {
  Matrix<T> x = solve_uncounted(b);
  ++counter.divisions;
  return x;
}

template <Scalar T>
Matrix<T> LuFactor<T>::inverse(OpCounter& counter) const {
  return solve(Matrix<T>::identity(lu_.size()), counter);
}

template class LuFactor<double>;
template class LuFactor<cplx>;

}  // namespace graphlogm
