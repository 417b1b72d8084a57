#include "graphlogm/balance.hpp"

#include <numeric>

namespace graphlogm {

bool BalanceTransform::is_identity() const {
  return std::all_of(scale.begin(), scale.end(), [](double s) { return s == 1.0; });
}

template <Scalar T>
Balanced<T> balance(const Matrix<T>& a) {
  const std::size_t n = a.size();
  Balanced<T> out{a, {std::vector<double>(n, 1.0), std::vector<std::size_t>(n)}};
  std::iota(out.transform.permutation.begin(), out.transform.permutation.end(), std::size_t{0});
  Matrix<T>& b = out.matrix;
  auto& d = out.transform.scale;

  constexpr double radix = 2.0;
  constexpr double radix2 = radix * radix;
  bool converged = false;
  while (!converged) {
    converged = true;
    for (std::size_t i = 0; i < n; ++i) {
      double c = 0.0, r = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(b(j, i));
        r += std::abs(b(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      const double s = c + r;
      double f = 1.0;
      double g = r / radix;
      while (c < g) {
        f *= radix;
        c *= radix2;
      }
      g = r * radix;
      while (c >= g) {
        f /= radix;
        c /= radix2;
      }
      if ((c + r) / f < 0.95 * s) {
        converged = false;
        d[i] *= f;
        // Column i scaled by f, row i by 1/f: exact for radix powers.
        for (std::size_t j = 0; j < n; ++j) {
          b(j, i) *= f;
          b(i, j) /= f;
        }
      }
    }
  }
  return out;
}

template <Scalar T>
Matrix<T> unbalance(const Matrix<T>& l, const BalanceTransform& t) {
  const std::size_t n = l.size();
  if (t.scale.size() != n) throw DimensionError("unbalance: transform size mismatch");
  Matrix<T> out = l;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) *= t.scale[i] / t.scale[j];
  return out;
}

template Balanced<double> balance(const Matrix<double>&);
template Balanced<cplx> balance(const Matrix<cplx>&);
template Matrix<double> unbalance(const Matrix<double>&, const BalanceTransform&);
template Matrix<cplx> unbalance(const Matrix<cplx>&, const BalanceTransform&);

}  // namespace graphlogm
