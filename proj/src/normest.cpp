#include "graphlogm/normest.hpp"

#include <numeric>

namespace graphlogm {
namespace {

constexpr std::size_t kColumns = 2;
constexpr int kMaxIterations = 5;

// Thin block stored column-major: column c occupies [c*n, (c+1)*n).
template <Scalar T>
using Block = std::vector<T>;

template <Scalar T>
Block<T> apply(const Matrix<T>& a, const Block<T>& x, bool adjoint_op) {
  const std::size_t n = a.size();
  Block<T> y(n * kColumns, T(0));
  for (std::size_t c = 0; c < kColumns; ++c) {
    const T* xc = x.data() + c * n;
    T* yc = y.data() + c * n;
    if (!adjoint_op) {
      for (std::size_t i = 0; i < n; ++i) {
        T s(0);
        const auto r = a.row(i);
        for (std::size_t j = 0; j < n; ++j) s += r[j] * xc[j];
        yc[i] = s;
      }
    } else {
      for (std::size_t i = 0; i < n; ++i) {
        const auto r = a.row(i);
        T xi = xc[i];
        for (std::size_t j = 0; j < n; ++j) {
          if constexpr (is_complex_v<T>)
            yc[j] += std::conj(r[j]) * xi;
          else
            yc[j] += r[j] * xi;
        }
      }
    }
  }
  return y;
}

// Applies the chain B^p C (or its adjoint) to the block.
template <Scalar T>
Block<T> apply_chain(const Matrix<T>& b, int p, const Matrix<T>* c, Block<T> x, bool adjoint_op,
                     OpCounter& counter) {
  if (!adjoint_op && c) {
    x = apply(*c, x, false);
    ++counter.estimation_products;
  }
  for (int i = 0; i < p; ++i) {
    x = apply(b, x, adjoint_op);
    ++counter.estimation_products;
  }
  if (adjoint_op && c) {
    x = apply(*c, x, true);
    ++counter.estimation_products;
  }
  return x;
}

template <Scalar T>
T sign_of(T v) {
  if constexpr (is_complex_v<T>) {
    const double m = std::abs(v);
    return m == 0.0 ? T(1) : v / m;
  } else {
    return v >= 0.0 ? 1.0 : -1.0;
  }
}

template <Scalar T>
double estimate(const Matrix<T>& b, int p, const Matrix<T>* c, OpCounter& counter) {
  if (p < 1) throw ArgumentError("est_power_norm: p must be >= 1");
  const std::size_t n = b.size();
  if (c && c->size() != n) throw DimensionError("est_power_norm: dimension mismatch");
  if (n == 0) return 0.0;

  Block<T> x(n * kColumns);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = T(inv_n);
    // Deterministic restart column with a fixed sign pattern.
    x[n + i] = T(((i * 7 + 3) / 2) % 2 == 0 ? inv_n : -inv_n);
  }
  if (n == 1) x[n] = x[0];

  std::vector<bool> visited(n, false);
  double est = 0.0;
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    const Block<T> y = apply_chain(b, p, c, x, false, counter);
    double best = 0.0;
    for (std::size_t col = 0; col < kColumns; ++col) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += std::abs(y[col * n + i]);
      best = std::max(best, s);
    }
    if (iter > 0 && best <= est) break;
    est = std::max(est, best);

    Block<T> sgn(n * kColumns);
    for (std::size_t i = 0; i < sgn.size(); ++i) sgn[i] = sign_of(y[i]);
    const Block<T> z = apply_chain(b, p, c, sgn, true, counter);

    std::vector<double> h(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t col = 0; col < kColumns; ++col) h[i] = std::max(h[i], std::abs(z[col * n + i]));
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t bb) { return h[a] > h[bb]; });

    // Next block: the unvisited unit vectors with largest gradient entries.
    std::fill(x.begin(), x.end(), T(0));
    std::size_t filled = 0;
    for (std::size_t idx : order) {
      if (filled == kColumns) break;
      if (visited[idx]) continue;
      visited[idx] = true;
      x[filled * n + idx] = T(1);
      ++filled;
    }
    if (filled == 0) break;
    for (std::size_t col = filled; col < kColumns; ++col)
      for (std::size_t i = 0; i < n; ++i) x[col * n + i] = x[i];
  }
  return est;
}

}  // namespace

template <Scalar T>
double est_power_norm(const Matrix<T>& b, int p, OpCounter& counter) {
  return estimate<T>(b, p, nullptr, counter);
}

template <Scalar T>
double est_power_norm(const Matrix<T>& b, int p, const Matrix<T>& c, OpCounter& counter) {
  return estimate<T>(b, p, &c, counter);
}

template double est_power_norm(const Matrix<double>&, int, OpCounter&);
template double est_power_norm(const Matrix<cplx>&, int, OpCounter&);
template double est_power_norm(const Matrix<double>&, int, const Matrix<double>&, OpCounter&);
template double est_power_norm(const Matrix<cplx>&, int, const Matrix<cplx>&, OpCounter&);

}  // namespace graphlogm
