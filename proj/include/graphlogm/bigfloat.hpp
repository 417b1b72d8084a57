#pragma once

#include <string>
#include <vector>

namespace graphlogm {

/// Binary precision needed for `digits` significant decimal digits.
long digits_to_bits(int digits);

/// Arbitrary-precision real backed by MPFR. Precision is fixed per value and
/// chosen explicitly; results of binary operations take the larger precision.
class BigFloat {
 public:
  explicit BigFloat(long bits, double v = 0.0);
  BigFloat(const BigFloat& o);
  BigFloat(BigFloat&& o) noexcept;
  BigFloat& operator=(const BigFloat& o);
  BigFloat& operator=(BigFloat&& o) noexcept;
  ~BigFloat();

  static BigFloat from_string(long bits, const std::string& s);
  /// p/q exactly rounded.
  static BigFloat ratio(long bits, long p, long q);

  long bits() const noexcept { return bits_; }
  double to_double() const;
  std::string to_string(int digits = 20) const;

  bool is_zero() const;
  int sign() const;

  BigFloat& operator+=(const BigFloat& o);
  BigFloat& operator-=(const BigFloat& o);
  BigFloat& operator*=(const BigFloat& o);
  BigFloat& operator/=(const BigFloat& o);
  BigFloat& operator*=(double d);

  friend BigFloat operator+(BigFloat a, const BigFloat& b) { return a += b; }
  friend BigFloat operator-(BigFloat a, const BigFloat& b) { return a -= b; }
  friend BigFloat operator*(BigFloat a, const BigFloat& b) { return a *= b; }
  friend BigFloat operator/(BigFloat a, const BigFloat& b) { return a /= b; }
  friend BigFloat operator-(BigFloat a) { return a.negate(); }

  friend bool operator<(const BigFloat& a, const BigFloat& b);
  friend bool operator>(const BigFloat& a, const BigFloat& b) { return b < a; }
  friend bool operator<=(const BigFloat& a, const BigFloat& b) { return !(b < a); }
  friend bool operator>=(const BigFloat& a, const BigFloat& b) { return !(a < b); }

  BigFloat& negate();
  BigFloat abs() const;
  BigFloat pow(long e) const;
  BigFloat log() const;

 private:
  void* raw_;  // mpfr_ptr; kept opaque so MPFR headers stay private.
  long bits_;
};

/// Truncated power series c_0 + c_1 x + ... + c_N x^N.
class BigSeries {
 public:
  BigSeries(long bits, std::size_t n);
  BigSeries(long bits, const std::vector<double>& coeffs);

  long bits() const noexcept { return bits_; }
  std::size_t truncation() const noexcept { return c_.size() - 1; }
  std::size_t size() const noexcept { return c_.size(); }
  BigFloat& operator[](std::size_t i) { return c_[i]; }
  const BigFloat& operator[](std::size_t i) const { return c_[i]; }
  std::vector<double> to_doubles() const;

  /// Copy truncated or zero-extended to degree n.
  BigSeries resized(std::size_t n) const;

  BigSeries& operator+=(const BigSeries& o);
  BigSeries& operator-=(const BigSeries& o);
  BigSeries& scale(const BigFloat& s);
  /// Truncated product at this series' truncation.
  BigSeries operator*(const BigSeries& o) const;
  /// exp(this); requires c_0 = 0.
  BigSeries exp() const;
  /// this(inner(x)); requires inner c_0 = 0.
  BigSeries compose(const BigSeries& inner) const;

 private:
  long bits_;
  std::vector<BigFloat> c_;
};

}  // namespace graphlogm
