#include "graphlogm/matrix.hpp"

namespace graphlogm {

template <Scalar T>
Matrix<T> gemm(const Matrix<T>& a, const Matrix<T>& b) {
  const std::size_t n = a.size();
  if (b.size() != n) throw DimensionError("mat_mul: dimension mismatch");
  Matrix<T> c(n);
  // i-k-j order keeps the inner loop contiguous for row-major storage.
  for (std::size_t i = 0; i < n; ++i) {
    auto ci = c.row(i);
    const auto ai = a.row(i);
    for (std::size_t k = 0; k < n; ++k) {
      const T aik = ai[k];
      if (aik == T(0)) continue;
      const auto bk = b.row(k);
      for (std::size_t j = 0; j < n; ++j) ci[j] += aik * bk[j];
    }
  }
  return c;
}

template <Scalar T>
Matrix<T> mat_mul(const Matrix<T>& a, const Matrix<T>& b, OpCounter& counter) {
  Matrix<T> c = gemm(a, b);
  ++counter.products;
  return c;
}

template <Scalar T>
double onenorm(const Matrix<T>& a) {
  const std::size_t n = a.size();
  std::vector<double> col(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = a.row(i);
    for (std::size_t j = 0; j < n; ++j) col[j] += std::abs(r[j]);
  }
  return n == 0 ? 0.0 : *std::max_element(col.begin(), col.end());
}

template <Scalar T>
double infnorm(const Matrix<T>& a) {
  double best = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double s = 0.0;
    for (const T& v : a.row(i)) s += std::abs(v);
    best = std::max(best, s);
  }
  return best;
}

template <Scalar T>
double frobenius_norm(const Matrix<T>& a) {
  double s = 0.0;
  for (const T& v : a.entries()) s += std::norm(v);
  return std::sqrt(s);
}

template <Scalar T>
Matrix<T> transpose(const Matrix<T>& a) {
  Matrix<T> t(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) t(j, i) = a(i, j);
  return t;
}

template <Scalar T>
Matrix<T> adjoint(const Matrix<T>& a) {
  Matrix<T> t(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) {
      if constexpr (is_complex_v<T>)
        t(j, i) = std::conj(a(i, j));
      else
        t(j, i) = a(i, j);
    }
  return t;
}

Matrix<cplx> to_complex(const Matrix<double>& a) {
  Matrix<cplx> c(a.size());
  for (std::size_t i = 0; i < a.entries().size(); ++i) c.entries()[i] = a.entries()[i];
  return c;
}

Matrix<double> real_part(const Matrix<cplx>& a) {
  Matrix<double> r(a.size());
  for (std::size_t i = 0; i < a.entries().size(); ++i) r.entries()[i] = a.entries()[i].real();
  return r;
}

double max_imag(const Matrix<cplx>& a) {
  double m = 0.0;
  for (const cplx& v : a.entries()) m = std::max(m, std::abs(v.imag()));
  return m;
}

#define GRAPHLOGM_INSTANTIATE(T)                                          \
  template Matrix<T> gemm(const Matrix<T>&, const Matrix<T>&);            \
  template Matrix<T> mat_mul(const Matrix<T>&, const Matrix<T>&, OpCounter&); \
  template double onenorm(const Matrix<T>&);                              \
  template double infnorm(const Matrix<T>&);                              \
  template double frobenius_norm(const Matrix<T>&);                       \
  template Matrix<T> transpose(const Matrix<T>&);                         \
  template Matrix<T> adjoint(const Matrix<T>&);

GRAPHLOGM_INSTANTIATE(double)
GRAPHLOGM_INSTANTIATE(cplx)
#undef GRAPHLOGM_INSTANTIATE

}  // namespace graphlogm
