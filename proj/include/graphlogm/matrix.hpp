#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <span>
#include <vector>

#include "graphlogm/errors.hpp"

namespace graphlogm {

using cplx = std::complex<double>;

template <class T>
struct is_complex : std::false_type {};
template <class T>
struct is_complex<std::complex<T>> : std::true_type {};
template <class T>
inline constexpr bool is_complex_v = is_complex<T>::value;

/// Real or complex double precision, the two scalar types the library is instantiated for.
template <class T>
concept Scalar = std::same_as<T, double> || std::same_as<T, cplx>;

/// Real part type of a scalar.
template <class T>
struct real_of {
  using type = T;
};
template <class T>
struct real_of<std::complex<T>> {
  using type = T;
};
template <class T>
using real_t = typename real_of<T>::type;

/// Unit roundoff of IEEE double precision, 2^-53.
inline constexpr double kUnitRoundoff = 0x1p-53;

/// Square dense matrix stored row-major.
///
/// Entries are checked to be finite when a matrix is built from an entry
/// vector; element access afterwards is unchecked.
template <Scalar T>
class Matrix {
 public:
  using value_type = T;

  Matrix() = default;
  explicit Matrix(std::size_t n, T fill = T{}) : n_(n), a_(n * n, fill) {}
  Matrix(std::size_t n, std::vector<T> entries) : n_(n), a_(std::move(entries)) {
    if (a_.size() != n_ * n_) throw DimensionError("matrix: entry count does not match n*n");
    for (const T& v : a_)
      if (!is_finite(v)) throw ArgumentError("matrix: non-finite entry");
  }

  static Matrix zeros(std::size_t n) { return Matrix(n); }
  static Matrix identity(std::size_t n) {
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t size() const noexcept { return n_; }
  bool empty() const noexcept { return n_ == 0; }

  T& operator()(std::size_t i, std::size_t j) noexcept { return a_[i * n_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const noexcept { return a_[i * n_ + j]; }

  std::span<T> row(std::size_t i) noexcept { return {a_.data() + i * n_, n_}; }
  std::span<const T> row(std::size_t i) const noexcept { return {a_.data() + i * n_, n_}; }
  std::span<T> entries() noexcept { return a_; }
  std::span<const T> entries() const noexcept { return a_; }

  Matrix& operator+=(const Matrix& b) {
    check_same(b);
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += b.a_[i];
    return *this;
  }
  Matrix& operator-=(const Matrix& b) {
    check_same(b);
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= b.a_[i];
    return *this;
  }
  Matrix& operator*=(T s) noexcept {
    for (T& v : a_) v *= s;
    return *this;
  }
  /// this += s * b
  Matrix& axpy(T s, const Matrix& b) {
    check_same(b);
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += s * b.a_[i];
    return *this;
  }
  /// Adds s to every diagonal entry (a linear combination with the identity, no product).
  Matrix& shift_diagonal(T s) noexcept {
    for (std::size_t i = 0; i < n_; ++i) a_[i * n_ + i] += s;
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(T s, Matrix a) { return a *= s; }
  friend Matrix operator-(Matrix a) { return a *= T(-1); }
  friend bool operator==(const Matrix&, const Matrix&) = default;

  bool all_finite() const {
    return std::all_of(a_.begin(), a_.end(), [](const T& v) { return is_finite(v); });
  }

 private:
  static bool is_finite(const T& v) {
    if constexpr (is_complex_v<T>)
      return std::isfinite(v.real()) && std::isfinite(v.imag());
    else
      return std::isfinite(v);
  }
  void check_same(const Matrix& b) const {
    if (b.n_ != n_) throw DimensionError("matrix: dimension mismatch");
  }

  std::size_t n_ = 0;
  std::vector<T> a_;
};

/// Cost accounting in units of n x n matrix products (M) and left divisions (D).
struct OpCounter {
  long products = 0;
  long divisions = 0;
  /// Matrix times thin-block products spent in norm estimation; not part of the M/D cost.
  long estimation_products = 0;

  /// D is priced at 4/3 M.
  double equivalent_m() const noexcept {
    return static_cast<double>(products) + 4.0 * static_cast<double>(divisions) / 3.0;
  }
};

/// Uncounted dense product. Prefer mat_mul, which charges the counter.
template <Scalar T>
Matrix<T> gemm(const Matrix<T>& a, const Matrix<T>& b);

/// n x n product; charges one M to the counter.
template <Scalar T>
Matrix<T> mat_mul(const Matrix<T>& a, const Matrix<T>& b, OpCounter& counter);

/// Max column absolute sum.
template <Scalar T>
double onenorm(const Matrix<T>& a);

/// Max row absolute sum.
template <Scalar T>
double infnorm(const Matrix<T>& a);

template <Scalar T>
double frobenius_norm(const Matrix<T>& a);

template <Scalar T>
Matrix<T> transpose(const Matrix<T>& a);

/// Conjugate transpose (plain transpose for real matrices).
template <Scalar T>
Matrix<T> adjoint(const Matrix<T>& a);

Matrix<cplx> to_complex(const Matrix<double>& a);

/// Real part, valid when the imaginary parts are known to vanish.
Matrix<double> real_part(const Matrix<cplx>& a);

/// Largest |imag| entry.
double max_imag(const Matrix<cplx>& a);

}  // namespace graphlogm
