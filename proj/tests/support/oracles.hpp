#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "graphlogm/lu.hpp"
#include "graphlogm/matrix.hpp"

namespace graphlogm::test {

inline constexpr double u = kUnitRoundoff;

/// Dense square matrix of long doubles, used only by the test oracles.
struct LdMatrix {
  std::size_t n = 0;
  std::vector<long double> a;

  explicit LdMatrix(std::size_t n_) : n(n_), a(n_ * n_, 0.0L) {}
  long double& operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
  long double operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }

  static LdMatrix from(const Matrix<double>& m) {
    LdMatrix r(m.size());
    for (std::size_t i = 0; i < r.a.size(); ++i) r.a[i] = m.entries()[i];
    return r;
  }
  Matrix<double> to_double() const {
    Matrix<double> r(n);
    for (std::size_t i = 0; i < a.size(); ++i) r.entries()[i] = static_cast<double>(a[i]);
    return r;
  }
};

inline LdMatrix ld_mul(const LdMatrix& x, const LdMatrix& y) {
  LdMatrix r(x.n);
  for (std::size_t i = 0; i < x.n; ++i)
    for (std::size_t k = 0; k < x.n; ++k) {
      const long double xik = x(i, k);
      if (xik == 0.0L) continue;
      for (std::size_t j = 0; j < x.n; ++j) r(i, j) += xik * y(k, j);
    }
  return r;
}

inline long double ld_norm1(const LdMatrix& x) {
  long double best = 0.0L;
  for (std::size_t j = 0; j < x.n; ++j) {
    long double s = 0.0L;
    for (std::size_t i = 0; i < x.n; ++i) s += std::fabs(x(i, j));
    best = std::max(best, s);
  }
  return best;
}

/// Matrix exponential in long double: scale to norm <= 1/2, degree-20 Taylor,
/// square back.
inline Matrix<double> expm_ref(const Matrix<double>& a) {
  LdMatrix x = LdMatrix::from(a);
  const long double nrm = ld_norm1(x);
  int s = 0;
  while (std::ldexp(nrm, -s) > 0.5L) ++s;
  for (long double& v : x.a) v = std::ldexp(v, -s);
  const std::size_t n = x.n;
  LdMatrix e(n), term(n);
  for (std::size_t i = 0; i < n; ++i) e(i, i) = term(i, i) = 1.0L;
  for (int j = 1; j <= 20; ++j) {
    term = ld_mul(term, x);
    for (long double& v : term.a) v /= j;
    for (std::size_t i = 0; i < e.a.size(); ++i) e.a[i] += term.a[i];
  }
  for (int i = 0; i < s; ++i) e = ld_mul(e, e);
  return e.to_double();
}

inline Matrix<double> random_matrix(std::size_t n, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  Matrix<double> m(n);
  for (double& v : m.entries()) v = d(rng);
  return m;
}

inline Matrix<double> scaled_to_norm1(Matrix<double> m, double target) {
  m *= target / onenorm(m);
  return m;
}

/// kappa_1 through an explicit inverse.
template <Scalar T>
double kappa1(const Matrix<T>& a) {
  OpCounter c;
  return onenorm(a) * onenorm(lu_factor(a).inverse(c));
}

template <Scalar T>
double rel_diff1(const Matrix<T>& x, const Matrix<T>& ref) {
  return onenorm(x - ref) / onenorm(ref);
}

/// Random SPD matrix Q diag(d) Q^T with d log-uniform in [lo, hi].
inline Matrix<double> random_spd(std::size_t n, std::mt19937_64& rng, double lo, double hi) {
  Matrix<double> q = random_matrix(n, rng);
  // Gram-Schmidt for an orthogonal Q.
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t p = 0; p < j; ++p) {
      double dot = 0.0;
      for (std::size_t i = 0; i < n; ++i) dot += q(i, j) * q(i, p);
      for (std::size_t i = 0; i < n; ++i) q(i, j) -= dot * q(i, p);
    }
    double nrm = 0.0;
    for (std::size_t i = 0; i < n; ++i) nrm += q(i, j) * q(i, j);
    nrm = std::sqrt(nrm);
    for (std::size_t i = 0; i < n; ++i) q(i, j) /= nrm;
  }
  std::uniform_real_distribution<double> d(std::log(lo), std::log(hi));
  Matrix<double> qd = q;
  for (std::size_t j = 0; j < n; ++j) {
    const double lam = std::exp(d(rng));
    for (std::size_t i = 0; i < n; ++i) qd(i, j) *= lam;
  }
  Matrix<double> r = gemm(qd, transpose(q));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) r(i, j) = r(j, i) = 0.5 * (r(i, j) + r(j, i));
  return r;
}

}  // namespace graphlogm::test
