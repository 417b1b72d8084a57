#include "graphlogm/analysis.hpp"

#include <cmath>
#include <limits>

namespace graphlogm {
namespace {

long checked_bits(int digits) {
  if (digits < kMinDigits) throw ArgumentError("analysis: precision below " + std::to_string(kMinDigits) + " digits");
  return digits_to_bits(digits);
}

std::size_t degree_of(const GraphScheme& s) { return std::size_t{1} << s.k; }

}  // namespace

BigSeries monomial_expand(const GraphScheme& s, int digits) {
  s.validate();
  const long bits = checked_bits(digits);
  const std::size_t n = degree_of(s);
  std::vector<BigSeries> p;
  p.emplace_back(bits, n);
  p.back()[0] = BigFloat(bits, 1.0);
  p.emplace_back(bits, n);
  p.back()[1] = BigFloat(bits, 1.0);
  auto combine = [&](const std::vector<double>& c) {
    BigSeries out(bits, n);
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (c[i] == 0.0) continue;
      BigSeries t = p[i];
      out += t.scale(BigFloat(bits, c[i]));
    }
    return out;
  };
  for (int j = 0; j < s.k; ++j) p.push_back(combine(s.h[j]) * combine(s.g[j]));
  return combine(s.y);
}

std::vector<double> monomial_expand_double(const GraphScheme& s) {
  s.validate();
  const std::size_t n = degree_of(s);
  std::vector<std::vector<double>> p{std::vector<double>(n + 1, 0.0), std::vector<double>(n + 1, 0.0)};
  p[0][0] = 1.0;
  p[1][1] = 1.0;
  auto combine = [&](const std::vector<double>& c) {
    std::vector<double> out(n + 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i)
      for (std::size_t d = 0; d <= n; ++d) out[d] += c[i] * p[i][d];
    return out;
  };
  for (int j = 0; j < s.k; ++j) {
    const auto l = combine(s.h[j]);
    const auto r = combine(s.g[j]);
    std::vector<double> prod(n + 1, 0.0);
    for (std::size_t a = 0; a <= n; ++a)
      for (std::size_t b = 0; a + b <= n; ++b) prod[a + b] += l[a] * r[b];
    p.push_back(std::move(prod));
  }
  return combine(s.y);
}

BigSeries log_taylor_series(std::size_t n, int digits) {
  const long bits = checked_bits(digits);
  BigSeries t(bits, n);
  for (std::size_t i = 1; i <= n; ++i) t[i] = BigFloat::ratio(bits, 1, static_cast<long>(i));
  return t;
}

std::vector<double> taylor_match_errors(const BigSeries& b, std::size_t n) {
  std::vector<double> e(n + 1, 0.0);
  e[0] = b[0].to_double();
  for (std::size_t i = 1; i <= n; ++i) {
    BigFloat d = i < b.size() ? b[i] : BigFloat(b.bits());
    d -= BigFloat::ratio(b.bits(), 1, static_cast<long>(i));
    d *= static_cast<double>(i);
    e[i] = d.to_double();
  }
  return e;
}

StabilityReport stability_indicator(const GraphScheme& s, const BigSeries& reference, int digits) {
  const long bits = checked_bits(digits);
  const std::size_t n = degree_of(s);
  if (reference.truncation() != n) throw ArgumentError("stability_indicator: reference degree mismatch");
  const std::vector<double> approx = monomial_expand_double(s);
  StabilityReport r;
  r.rel.assign(n + 1, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 1; i <= n; ++i) {
    if (reference[i].is_zero()) continue;
    BigFloat d = reference[i] - BigFloat(bits, approx[i]);
    d /= reference[i];
    r.rel[i] = d.abs().to_double();
    if (r.rel[i] > r.max) {
      r.max = r.rel[i];
      r.argmax = i;
    }
  }
  return r;
}

StabilityReport stability_indicator(const GraphScheme& s, int digits) {
  return stability_indicator(s, monomial_expand(s, digits), digits);
}

BigSeries backward_series(const BigSeries& b, std::size_t n) {
  if (!b[0].is_zero()) throw ArgumentError("backward_series: b_0 must vanish");
  const long bits = b.bits();
  // -S(-x) has coefficients (-1)^{i+1} b_i.
  BigSeries inner(bits, n);
  for (std::size_t i = 1; i <= n && i < b.size(); ++i) {
    inner[i] = b[i];
    if (i % 2 == 0) inner[i].negate();
  }
  BigSeries d = inner.exp();
  d[0] -= BigFloat(bits, 1.0);
  if (n >= 1) d[1] -= BigFloat(bits, 1.0);
  return d;
}

ThetaResult theta_for_order(const BigSeries& c, int m, double u, double cap) {
  if (m < 1) throw ArgumentError("theta_for_order: m must be >= 1");
  const std::size_t n = c.truncation();
  if (n < static_cast<std::size_t>(m) + 1) throw TruncationError("theta_for_order: truncation below order");
  const long bits = c.bits();
  // hbar(theta) = sum_{j>=m} |c_{j+1}| theta^j.
  std::vector<BigFloat> a;
  for (std::size_t j = static_cast<std::size_t>(m); j + 1 <= n; ++j) a.push_back(c[j + 1].abs());
  const bool all_zero = std::all_of(a.begin(), a.end(), [](const BigFloat& v) { return v.is_zero(); });
  ThetaResult r;
  r.truncation = n;
  if (all_zero) {
    r.theta = cap;
    r.unbounded = true;
    return r;
  }
  const BigFloat ubig(bits, u);
  auto hbar = [&](double theta) {
    const BigFloat t(bits, theta);
    BigFloat acc(bits);
    for (std::size_t i = a.size(); i-- > 0;) {
      acc *= t;
      acc += a[i];
    }
    acc *= t.pow(m);
    return acc;
  };
  double lo = 0.0, hi = cap;
  if (hbar(cap) <= ubig) {
    lo = cap;
  } else {
    lo = cap;
    while (lo > 1e-300 && hbar(lo) > ubig) lo *= 0.5;
    hi = 2.0 * lo;
    while ((hi - lo) > 1e-12 * hi) {
      const double mid = 0.5 * (lo + hi);
      (hbar(mid) <= ubig ? lo : hi) = mid;
    }
  }
  r.theta = lo;
  // The last few retained terms must be negligible at theta.
  const BigFloat limit(bits, u / 100.0);
  const std::size_t last = std::min<std::size_t>(8, a.size());
  for (std::size_t i = a.size() - last; i < a.size(); ++i) {
    BigFloat term = a[i] * BigFloat(bits, lo).pow(static_cast<long>(i) + m);
    if (term > limit) throw TruncationError("theta_for_order: series tail not negligible at theta");
  }
  return r;
}

ThetaResult scheme_theta(const GraphScheme& s, int m, int digits) {
  const BigSeries b = monomial_expand(s, digits);
  std::size_t n = std::max<std::size_t>(4 * static_cast<std::size_t>(m), 128);
  for (;; n *= 2) {
    try {
      return theta_for_order(backward_series(b, n), m);
    } catch (const TruncationError&) {
      if (n >= 4096) throw;
    }
  }
}

TailReport tail_coeff_check(const BigSeries& b, int m_k) {
  TailReport r;
  const auto e = taylor_match_errors(b, b.truncation());
  for (std::size_t i = static_cast<std::size_t>(m_k) + 1; i < e.size(); ++i) {
    const double v = std::abs(e[i]);
    r.max = std::max(r.max, v);
    if (!(v <= 1.0)) {
      r.pass = false;
      r.violations.emplace_back(i, v);
    }
  }
  return r;
}

TailReport tail_coeff_check(const GraphScheme& s, int m_k, int digits) {
  return tail_coeff_check(monomial_expand(s, digits), m_k);
}

const ThetaRow& ThetaTable::row(int k) const {
  for (const auto& r : rows)
    if (r.k == k) return r;
  throw ArgumentError("ThetaTable: no row for k=" + std::to_string(k));
}

void ThetaTable::validate() const {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].k != static_cast<int>(i) + 1) throw ArgumentError("ThetaTable: rows must run k = 1..n");
    if (!(rows[i].theta > 0.0)) throw ArgumentError("ThetaTable: theta must be positive");
    if (i > 0 && rows[i].theta < rows[i - 1].theta) throw ArgumentError("ThetaTable: theta must not decrease with k");
  }
}

namespace {

void add_comparison_data(ThetaTable& t) {
  t.taylor_ref = {{5, 21, 24, 2.11e-1}, {6, 27, 32, 2.96e-1}, {7, 33, 40, 3.73e-1},
                  {8, 39, 48, 4.28e-1}, {9, 45, 54, 4.90e-1}, {10, 52, 63, 5.41e-1},
                  {11, 59, 70, 5.82e-1}, {12, 67, 80, 6.18e-1}, {13, 75, 88, 6.54e-1}};
  t.pade = {{1, 2, 1.59e-5},  {2, 4, 2.31e-3},  {3, 6, 1.94e-2},  {4, 8, 6.21e-2},
            {5, 10, 1.28e-1}, {6, 12, 2.06e-1}, {7, 14, 2.88e-1}, {8, 16, 3.67e-1},
            {9, 18, 4.39e-1}, {10, 20, 5.03e-1}, {11, 22, 5.60e-1}, {12, 24, 6.09e-1},
            {13, 26, 6.52e-1}, {14, 28, 6.89e-1}, {15, 30, 7.21e-1}, {16, 32, 7.49e-1}};
}

}  // namespace

ThetaTable published_theta_table() {
  ThetaTable t;
  t.rows = {{1, 2, false, 2, 1.83e-8},    {2, 4, false, 4, 1.53e-4},    {3, 8, false, 8, 1.33e-2},
            {4, 14, true, 16, 9.31e-2},   {5, 14, true, 32, 2.46e-1},   {6, 20, true, 64, 3.72e-1},
            {7, 24, true, 128, 5.86e-1},  {8, 27, true, 256, 6.69e-1},  {9, 28, true, 512, 7.28e-1}};
  add_comparison_data(t);
  return t;
}

ThetaTable shipped_theta_table() {
  ThetaTable t;
  for (int k = 1; k <= builtin_max_k(); ++k) {
    const GraphScheme& s = builtin_scheme(k);
    t.rows.push_back({k, s.meta.m_order, s.meta.order_plus, s.meta.degree, s.meta.theta});
  }
  add_comparison_data(t);
  t.validate();
  return t;
}

ThetaTable taylor_theta_table(const ThetaTable& base, int digits) {
  ThetaTable t;
  t.taylor_ref = base.taylor_ref;
  t.pade = base.pade;
  for (const ThetaRow& r : base.rows) {
    const BigSeries b = log_taylor_series(static_cast<std::size_t>(r.m), digits);
    std::size_t n = std::max<std::size_t>(4 * static_cast<std::size_t>(r.m), 128);
    for (;;) {
      try {
        const ThetaResult th = theta_for_order(backward_series(b, n), r.m);
        t.rows.push_back({r.k, r.m, false, r.m, th.theta});
        break;
      } catch (const TruncationError&) {
        if (n >= 4096) throw;
        n *= 2;
      }
    }
  }
  t.validate();
  return t;
}

std::vector<CostRow> cost_compare(const ThetaTable& table) {
  std::vector<CostRow> out;
  if (table.rows.empty()) return out;
  auto pair_with = [&](const char* tag, int k, double cost, double theta) {
    const ThetaRow* pick = &table.rows.back();
    for (const auto& r : table.rows)
      if (r.theta >= theta) {
        pick = &r;
        break;
      }
    CostRow c;
    c.competitor = tag;
    c.poly_k = pick->k;
    c.poly_cost = pick->k;
    c.poly_theta = pick->theta;
    c.other_k = k;
    c.other_cost = cost;
    c.other_theta = theta;
    c.poly_dominates = pick->theta >= theta && c.poly_cost <= cost;
    c.cost_gap = cost - c.poly_cost;
    out.push_back(c);
  };
  for (const auto& p : table.pade) pair_with("pade", p.k, p.cost(), p.theta);
  for (const auto& t : table.taylor_ref) pair_with("taylor", t.k, t.k, t.theta);
  return out;
}

}  // namespace graphlogm
