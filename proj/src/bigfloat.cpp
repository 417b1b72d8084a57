#include "graphlogm/bigfloat.hpp"

#include <mpfr.h>

#include <cmath>

#include "graphlogm/errors.hpp"

namespace graphlogm {
namespace {

mpfr_ptr P(void* r) { return static_cast<mpfr_ptr>(r); }

void* make(long bits) {
  auto* r = new __mpfr_struct;
  mpfr_init2(r, static_cast<mpfr_prec_t>(bits));
  return r;
}

}  // namespace

long digits_to_bits(int digits) {
  return static_cast<long>(std::ceil(digits * 3.3219280948873623)) + 8;
}

BigFloat::BigFloat(long bits, double v) : raw_(make(bits)), bits_(bits) { mpfr_set_d(P(raw_), v, MPFR_RNDN); }

BigFloat::BigFloat(const BigFloat& o) : raw_(make(o.bits_)), bits_(o.bits_) {
  mpfr_set(P(raw_), P(o.raw_), MPFR_RNDN);
}

BigFloat::BigFloat(BigFloat&& o) noexcept : raw_(o.raw_), bits_(o.bits_) { o.raw_ = nullptr; }

BigFloat& BigFloat::operator=(const BigFloat& o) {
  if (this == &o) return *this;
  if (!raw_) raw_ = make(o.bits_);
  if (bits_ != o.bits_) {
    mpfr_set_prec(P(raw_), static_cast<mpfr_prec_t>(o.bits_));
    bits_ = o.bits_;
  }
  mpfr_set(P(raw_), P(o.raw_), MPFR_RNDN);
  return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& o) noexcept {
  std::swap(raw_, o.raw_);
  std::swap(bits_, o.bits_);
  return *this;
}

BigFloat::~BigFloat() {
  if (raw_) {
    mpfr_clear(P(raw_));
    delete P(raw_);
  }
}

BigFloat BigFloat::from_string(long bits, const std::string& s) {
  BigFloat r(bits);
  if (mpfr_set_str(P(r.raw_), s.c_str(), 10, MPFR_RNDN) != 0) throw ParseError("bigfloat: cannot parse '" + s + "'");
  return r;
}

BigFloat BigFloat::ratio(long bits, long p, long q) {
  BigFloat r(bits);
  mpfr_set_si(P(r.raw_), p, MPFR_RNDN);
  mpfr_div_si(P(r.raw_), P(r.raw_), q, MPFR_RNDN);
  return r;
}

double BigFloat::to_double() const { return mpfr_get_d(P(raw_), MPFR_RNDN); }

std::string BigFloat::to_string(int digits) const {
  std::vector<char> buf(static_cast<std::size_t>(digits) + 32);
  mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, P(raw_));
  return buf.data();
}

bool BigFloat::is_zero() const { return mpfr_zero_p(P(raw_)) != 0; }
int BigFloat::sign() const { return mpfr_sgn(P(raw_)); }

namespace {
void widen(void*& raw, long& bits, long other) {
  if (other > bits) {
    mpfr_prec_round(P(raw), static_cast<mpfr_prec_t>(other), MPFR_RNDN);
    bits = other;
  }
}
}  // namespace

BigFloat& BigFloat::operator+=(const BigFloat& o) {
  widen(raw_, bits_, o.bits_);
  mpfr_add(P(raw_), P(raw_), P(o.raw_), MPFR_RNDN);
  return *this;
}
BigFloat& BigFloat::operator-=(const BigFloat& o) {
  widen(raw_, bits_, o.bits_);
  mpfr_sub(P(raw_), P(raw_), P(o.raw_), MPFR_RNDN);
  return *this;
}
BigFloat& BigFloat::operator*=(const BigFloat& o) {
  widen(raw_, bits_, o.bits_);
  mpfr_mul(P(raw_), P(raw_), P(o.raw_), MPFR_RNDN);
  return *this;
}
BigFloat& BigFloat::operator/=(const BigFloat& o) {
  widen(raw_, bits_, o.bits_);
  mpfr_div(P(raw_), P(raw_), P(o.raw_), MPFR_RNDN);
  return *this;
}
BigFloat& BigFloat::operator*=(double d) {
  mpfr_mul_d(P(raw_), P(raw_), d, MPFR_RNDN);
  return *this;
}

bool operator<(const BigFloat& a, const BigFloat& b) { return mpfr_less_p(P(a.raw_), P(b.raw_)) != 0; }

BigFloat& BigFloat::negate() {
  mpfr_neg(P(raw_), P(raw_), MPFR_RNDN);
  return *this;
}

BigFloat BigFloat::abs() const {
  BigFloat r(*this);
  mpfr_abs(P(r.raw_), P(r.raw_), MPFR_RNDN);
  return r;
}

BigFloat BigFloat::pow(long e) const {
  BigFloat r(bits_);
  mpfr_pow_si(P(r.raw_), P(raw_), e, MPFR_RNDN);
  return r;
}

BigFloat BigFloat::log() const {
  BigFloat r(bits_);
  mpfr_log(P(r.raw_), P(raw_), MPFR_RNDN);
  return r;
}

BigSeries::BigSeries(long bits, std::size_t n) : bits_(bits), c_(n + 1, BigFloat(bits)) {}

BigSeries::BigSeries(long bits, const std::vector<double>& coeffs) : bits_(bits) {
  if (coeffs.empty()) throw ArgumentError("BigSeries: empty coefficient list");
  c_.reserve(coeffs.size());
  for (double v : coeffs) c_.emplace_back(bits, v);
}

std::vector<double> BigSeries::to_doubles() const {
  std::vector<double> v;
  v.reserve(c_.size());
  for (const auto& c : c_) v.push_back(c.to_double());
  return v;
}

BigSeries BigSeries::resized(std::size_t n) const {
  BigSeries r(bits_, n);
  for (std::size_t i = 0; i <= n && i < c_.size(); ++i) r.c_[i] = c_[i];
  return r;
}

BigSeries& BigSeries::operator+=(const BigSeries& o) {
  for (std::size_t i = 0; i < c_.size() && i < o.c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

BigSeries& BigSeries::operator-=(const BigSeries& o) {
  for (std::size_t i = 0; i < c_.size() && i < o.c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

BigSeries& BigSeries::scale(const BigFloat& s) {
  for (auto& c : c_) c *= s;
  return *this;
}

BigSeries BigSeries::operator*(const BigSeries& o) const {
  const std::size_t n = truncation();
  BigSeries r(bits_, n);
  BigFloat t(bits_);
  for (std::size_t i = 0; i <= n; ++i) {
    if (c_[i].is_zero()) continue;
    for (std::size_t j = 0; i + j <= n && j < o.c_.size(); ++j) {
      if (o.c_[j].is_zero()) continue;
      t = c_[i];
      t *= o.c_[j];
      r.c_[i + j] += t;
    }
  }
  return r;
}

BigSeries BigSeries::exp() const {
  if (!c_[0].is_zero()) throw ArgumentError("BigSeries::exp: constant term must vanish");
  // e_0 = 1, e_n = (1/n) sum_{j=1}^{n} j s_j e_{n-j}.
  const std::size_t n = truncation();
  BigSeries e(bits_, n);
  e.c_[0] = BigFloat(bits_, 1.0);
  BigFloat t(bits_);
  for (std::size_t m = 1; m <= n; ++m) {
    BigFloat acc(bits_);
    for (std::size_t j = 1; j <= m; ++j) {
      if (c_[j].is_zero()) continue;
      t = c_[j];
      t *= static_cast<double>(j);
      t *= e.c_[m - j];
      acc += t;
    }
    acc /= BigFloat(bits_, static_cast<double>(m));
    e.c_[m] = std::move(acc);
  }
  return e;
}

BigSeries BigSeries::compose(const BigSeries& inner) const {
  if (!inner.c_[0].is_zero()) throw ArgumentError("BigSeries::compose: inner constant term must vanish");
  const std::size_t n = truncation();
  const BigSeries in = inner.resized(n);
  // Horner in the series ring.
  BigSeries r(bits_, n);
  for (std::size_t i = c_.size(); i-- > 0;) {
    r = r * in;
    r.c_[0] += c_[i];
  }
  return r;
}

}  // namespace graphlogm
