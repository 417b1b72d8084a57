#include <Eigen/Dense>
#include <cmath>

#include "fit_internal.hpp"

namespace graphlogm::detail {

LmResult levenberg_marquardt(const ResidualFn& fn, std::vector<long double> x, int max_iterations, long double tol) {
  using LMat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  using LVec = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
  const std::size_t n = x.size();
  std::vector<long double> r, rn;
  std::vector<std::vector<long double>> jac, jn;
  auto norm2 = [](const std::vector<long double>& v) {
    long double s = 0;
    for (long double e : v) s += e * e;
    return s;
  };
  fn(x, r, jac);
  long double cur = norm2(r);
  long double lam = 1e-3L;
  LmResult out;
  for (int it = 0; it < max_iterations && std::isfinite(cur); ++it) {
    out.iterations = it + 1;
    if (std::sqrt(cur) <= tol) break;
    const std::size_t m = r.size();
    LMat a(m + n, n);
    LVec rhs = LVec::Zero(static_cast<Eigen::Index>(m + n));
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t q = 0; q < n; ++q) a(i, q) = jac[i][q];
      rhs(i) = -r[i];
    }
    LVec d(n);
    for (std::size_t q = 0; q < n; ++q) d(q) = a.topRows(m).col(q).norm() + 1e-30L;
    bool accepted = false;
    for (int tries = 0; tries < 30 && !accepted; ++tries) {
      a.bottomRows(n).setZero();
      for (std::size_t q = 0; q < n; ++q) a(m + q, q) = std::sqrt(lam) * d(q);
      const LVec dx = a.householderQr().solve(rhs);
      std::vector<long double> xn(x);
      for (std::size_t q = 0; q < n; ++q) xn[q] += dx(q);
      fn(xn, rn, jn);
      const long double f = norm2(rn);
      if (std::isfinite(f) && f < cur) {
        x = std::move(xn);
        r.swap(rn);
        jac.swap(jn);
        cur = f;
        lam = std::max(lam / 3, 1e-18L);
        accepted = true;
      } else {
        lam *= 4;
      }
    }
    if (!accepted) break;
  }
  out.x = std::move(x);
  out.norm = std::sqrt(cur);
  return out;
}

}  // namespace graphlogm::detail
