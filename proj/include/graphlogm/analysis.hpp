#pragma once

#include <optional>
#include <string>
#include <vector>

#include "graphlogm/bigfloat.hpp"
#include "graphlogm/scheme.hpp"

namespace graphlogm {

inline constexpr int kDefaultDigits = 300;
inline constexpr int kMinDigits = 50;

/// Monomial coefficients of the polynomial the scheme computes, with its double
/// coefficients taken as exact. Degree 2^k.
BigSeries monomial_expand(const GraphScheme& s, int digits = kDefaultDigits);

/// Same expansion carried out in double arithmetic, rounding after every
/// scalar operation.
std::vector<double> monomial_expand_double(const GraphScheme& s);

/// Exact monomial coefficients of -log(1-x), 1/i, through degree n.
BigSeries log_taylor_series(std::size_t n, int digits = kDefaultDigits);

/// Signed scaled errors (b_i - 1/i) i for i = 1..n; entry 0 is b_0.
std::vector<double> taylor_match_errors(const BigSeries& b, std::size_t n);

struct StabilityReport {
  std::vector<double> rel;  ///< |b_i - bt_i| / |b_i|, NaN where b_i = 0.
  double max = 0.0;
  std::size_t argmax = 0;
  double max_in_u() const { return max / kUnitRoundoff; }
};

/// Relative error between a reference expansion and the double-arithmetic
/// expansion of the scheme. Indices 1..degree are compared.
StabilityReport stability_indicator(const GraphScheme& s, const BigSeries& reference, int digits = kDefaultDigits);
/// Reference is the exact expansion of the stored coefficients.
StabilityReport stability_indicator(const GraphScheme& s, int digits = kDefaultDigits);

/// Coefficients of exp(-S(-x)) - 1 - x through degree n, S(x) = sum b_i x^i.
BigSeries backward_series(const BigSeries& b, std::size_t n);

struct ThetaResult {
  double theta = 0.0;
  bool unbounded = false;  ///< All relevant coefficients vanish; theta is the cap.
  std::size_t truncation = 0;
};

/// Largest theta with sum_{j>=m} |c_{j+1}| theta^j <= u, to about 1e-10 relative.
/// Throws TruncationError when the tail of c is not negligible at theta.
ThetaResult theta_for_order(const BigSeries& c, int m, double u = kUnitRoundoff, double cap = 1.0);

/// Expansion, backward series with N = max(4m, 128) raised on truncation
/// failure, then theta_for_order.
ThetaResult scheme_theta(const GraphScheme& s, int m, int digits = kDefaultDigits);

struct TailReport {
  bool pass = true;
  double max = 0.0;  ///< Largest |(1/i - b_i) i| over the checked range.
  std::vector<std::pair<std::size_t, double>> violations;
};

/// Checks |(1/i - b_i) i| <= 1 for m_k < i <= degree.
TailReport tail_coeff_check(const BigSeries& b, int m_k);
TailReport tail_coeff_check(const GraphScheme& s, int m_k, int digits = kDefaultDigits);

struct ThetaRow {
  int k = 0;
  int m = 0;
  bool plus = false;
  int degree = 0;
  double theta = 0.0;
  std::string order_label() const { return std::to_string(m) + (plus ? "+" : ""); }
};

/// Prior Taylor-based algorithm: cost k M, order m, maximum degree.
struct TaylorRefRow {
  int k = 0;
  int m = 0;
  int max_degree = 0;
  double theta = 0.0;
};

/// Diagonal Padé r_k in partial fractions: cost k * 4/3 M.
struct PadeRow {
  int k = 0;
  int order = 0;
  double theta = 0.0;
  double cost() const { return 4.0 * k / 3.0; }
};

struct ThetaTable {
  std::vector<ThetaRow> rows;
  std::vector<TaylorRefRow> taylor_ref;
  std::vector<PadeRow> pade;

  const ThetaRow& row(int k) const;
  int max_k() const { return rows.empty() ? 0 : rows.back().k; }
  /// Throws ArgumentError unless k runs 1..n and theta is positive and
  /// non-decreasing.
  void validate() const;
};

/// Published thresholds and comparison data.
ThetaTable published_theta_table();
/// Thresholds recorded in the bundled schemes, as used by logm.
ThetaTable shipped_theta_table();
/// Same orders as `base`, thresholds of the truncated Taylor polynomial of
/// each order.
ThetaTable taylor_theta_table(const ThetaTable& base, int digits = 100);

struct CostRow {
  std::string competitor;  ///< "pade" or "taylor".
  int poly_k = 0;
  double poly_cost = 0.0;
  double poly_theta = 0.0;
  int other_k = 0;
  double other_cost = 0.0;
  double other_theta = 0.0;
  bool poly_dominates = false;  ///< poly theta >= other theta at no higher cost.
  double cost_gap = 0.0;        ///< other cost - poly cost.
};

/// For each competitor row, pairs the cheapest polynomial row whose theta
/// reaches the competitor's, or the largest polynomial row if none does.
std::vector<CostRow> cost_compare(const ThetaTable& table);

}  // namespace graphlogm
