#include <cmath>
#include <random>

#include "fit_internal.hpp"
#include "graphlogm/analysis.hpp"
#include "graphlogm/fit.hpp"

namespace graphlogm {
namespace {

using detail::LdGraph;

constexpr int kPolishDigits = 120;

// Residuals (b_i - 1/i) i, i = 2..m, plus optional weighted extra orders.
detail::ResidualFn moment_residuals(const LdGraph& base, const ParamLayout& layout, int m) {
  return [base, &layout, m](const std::vector<long double>& x, std::vector<long double>& r,
                            std::vector<std::vector<long double>>& jac) {
    LdGraph g = base;
    g.set_params(x);
    std::vector<long double> b;
    std::vector<std::vector<long double>> db;
    detail::monomial_jacobian_ld(g, layout, static_cast<std::size_t>(m), b, &db);
    r.clear();
    jac.clear();
    for (int i = 2; i <= m; ++i) {
      const auto ii = static_cast<std::size_t>(i);
      r.push_back((b[ii] - 1.0L / i) * i);
      std::vector<long double> row(layout.size());
      for (std::size_t q = 0; q < layout.size(); ++q) row[q] = db[q][ii] * i;
      jac.push_back(std::move(row));
    }
  };
}

GraphScheme mask_eq5() {
  constexpr double F = NAN;
  GraphScheme s = restricted_skeleton(3);
  s.h[1] = {0, 0, 1};
  s.g[1] = {0, F, F};
  s.h[2] = {0, F, F, 1};
  s.g[2] = {0, 0, F, 1};
  s.y = {0, 1, F, F, 1};
  return s;
}

GraphScheme mask_k4() {
  constexpr double F = NAN;
  GraphScheme s = restricted_skeleton(4);
  s.h[1] = {0, 0, 1};
  s.g[1] = {0, F, F};
  s.h[2] = {0, F, F, 1};
  s.g[2] = {0, 0, F, 1};
  s.h[3] = {0, F, F, F, 1};
  s.g[3] = {0, F, F, F, 1};
  s.y = {0, 1, F, F, F, 1};
  return s;
}

double ulp_of(double x) { return std::nextafter(x, INFINITY) - x; }

double step_ulps(double x, long d) {
  for (; d > 0; --d) x = std::nextafter(x, INFINITY);
  for (; d < 0; ++d) x = std::nextafter(x, -INFINITY);
  return x;
}

struct PolishTarget {
  int m = 0;
  double e_tol_u = 1.0;  ///< Bound on |(b_i - 1/i) i| in units of u.
  double c_tol = 0.0;    ///< Bound on |c_i| of the backward series, 0 to ignore.
};

// Exact scaled constraint values at the stored doubles; |value| <= 1 is feasible.
std::vector<double> exact_constraints(const GraphScheme& s, const PolishTarget& t) {
  const BigSeries b = monomial_expand(s, kPolishDigits);
  const auto e = taylor_match_errors(b, static_cast<std::size_t>(t.m));
  std::vector<double> v;
  for (int i = 2; i <= t.m; ++i) v.push_back(e[static_cast<std::size_t>(i)] / kUnitRoundoff / t.e_tol_u);
  if (t.c_tol > 0) {
    const BigSeries c = backward_series(b, static_cast<std::size_t>(t.m));
    for (int i = 2; i <= t.m; ++i) v.push_back(c[static_cast<std::size_t>(i)].to_double() / t.c_tol);
  }
  return v;
}

double max_abs(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Integer search over per-coefficient ulp offsets on the linearized constraints.
GraphScheme ulp_polish(GraphScheme s, const ParamLayout& layout, const PolishTarget& t, std::mt19937_64& rng) {
  std::vector<double> best_v = exact_constraints(s, t);
  double best_obj = max_abs(best_v);
  for (int round = 0; round < 4 && best_obj > 1.0; ++round) {
    const std::vector<double> x = layout.pack(s);
    const MonomialJacobian mj = monomial_jacobian(s, layout, static_cast<std::size_t>(t.m));
    const std::size_t np = layout.size();
    std::vector<std::vector<double>> a;  // a[row][q]: change per ulp of slot q.
    for (int i = 2; i <= t.m; ++i) {
      std::vector<double> row(np);
      for (std::size_t q = 0; q < np; ++q)
        row[q] = static_cast<double>(mj.db[q][static_cast<std::size_t>(i)]) * i * ulp_of(x[q]) / kUnitRoundoff / t.e_tol_u;
      a.push_back(std::move(row));
    }
    if (t.c_tol > 0) {
      // c_i = (-1)^{i+1} (delta_i - delta_{i-1}) to first order.
      for (int i = 2; i <= t.m; ++i) {
        std::vector<double> row(np);
        const double sgn = i % 2 ? 1.0 : -1.0;
        for (std::size_t q = 0; q < np; ++q)
          row[q] = sgn *
                   static_cast<double>(mj.db[q][static_cast<std::size_t>(i)] - mj.db[q][static_cast<std::size_t>(i - 1)]) *
                   ulp_of(x[q]) / t.c_tol;
        a.push_back(std::move(row));
      }
    }
    const std::vector<double> v0 = best_v;
    std::vector<long> d(np, 0);
    std::vector<double> cur = v0;
    auto obj_after = [&](std::size_t q, long step) {
      double m = 0;
      for (std::size_t r = 0; r < cur.size(); ++r) m = std::max(m, std::abs(cur[r] + step * a[r][q]));
      return m;
    };
    auto apply = [&](std::size_t q, long step) {
      d[q] += step;
      for (std::size_t r = 0; r < cur.size(); ++r) cur[r] += step * a[r][q];
    };
    auto greedy = [&] {
      while (true) {
        double best = max_abs(cur);
        std::size_t bq = np;
        long bs = 0;
        for (std::size_t q = 0; q < np; ++q) {
          if (x[q] == 0.0) continue;
          for (long st : {-3L, -2L, -1L, 1L, 2L, 3L}) {
            const double o = obj_after(q, st);
            if (o < best - 1e-12) {
              best = o;
              bq = q;
              bs = st;
            }
          }
        }
        if (bq == np) break;
        apply(bq, bs);
      }
    };
    greedy();
    std::vector<long> best_d = d;
    double best_lin = max_abs(cur);
    std::uniform_int_distribution<std::size_t> pick(0, np - 1);
    std::uniform_int_distribution<int> sign(0, 1);
    for (int kick = 0; kick < 3000 && best_lin > 0.5; ++kick) {
      for (int z = 0; z < 3; ++z) {
        const std::size_t q = pick(rng);
        if (x[q] != 0.0) apply(q, sign(rng) ? 1 : -1);
      }
      greedy();
      if (max_abs(cur) < best_lin) {
        best_lin = max_abs(cur);
        best_d = d;
      } else {
        // Return to the best point before the next kick.
        for (std::size_t q = 0; q < np; ++q)
          if (d[q] != best_d[q]) apply(q, best_d[q] - d[q]);
      }
    }
    std::vector<double> xn(x);
    for (std::size_t q = 0; q < np; ++q) xn[q] = step_ulps(x[q], best_d[q]);
    GraphScheme cand = s;
    layout.unpack(xn, cand);
    const std::vector<double> v = exact_constraints(cand, t);
    if (max_abs(v) < best_obj) {
      best_obj = max_abs(v);
      best_v = v;
      s = std::move(cand);
    } else {
      break;
    }
  }
  return s;
}

struct Solved {
  std::vector<long double> x;
  long double norm;
};

// Multi-start LM on the moment equations; keeps converged solutions.
std::vector<Solved> solve_moments(const LdGraph& base, const ParamLayout& layout, int m, int want, int max_tries,
                                  std::mt19937_64& rng, const std::vector<long double>* start) {
  std::normal_distribution<long double> nd(0.0L, 0.5L);
  const auto fn = moment_residuals(base, layout, m);
  std::vector<Solved> found;
  for (int t = 0; t < max_tries && static_cast<int>(found.size()) < want; ++t) {
    std::vector<long double> x0(layout.size());
    if (start && t == 0)
      x0 = *start;
    else
      for (auto& v : x0) v = nd(rng);
    const auto r = detail::levenberg_marquardt(fn, x0, 500, 1e-19L);
    if (r.norm < 1e-16L) found.push_back({r.x, r.norm});
  }
  return found;
}

}  // namespace

namespace detail {

GraphScheme taylor_moment_seed(int k, double radius, std::mt19937_64& rng, int max_order, int tries_per_order,
                               int* matched) {
  const ParamLayout layout = ParamLayout::gauged(k);
  const GraphScheme skeleton = restricted_skeleton(k);
  const LdGraph base(skeleton, layout);
  const int hi = std::min(max_order > 0 ? max_order : (1 << k), std::min(1 << k, k * k));
  for (int m = hi; m >= 2; --m) {
    const auto found = solve_moments(base, layout, m, tries_per_order, tries_per_order, rng, nullptr);
    if (found.empty()) continue;
    GraphScheme best;
    double best_err = INFINITY;
    for (const auto& f : found) {
      LdGraph g = base;
      g.set_params(f.x);
      GraphScheme s = g.to_scheme(skeleton);
      const double e = boundary_max_error(s, radius, 256);
      if (e < best_err) {
        best_err = e;
        best = std::move(s);
      }
    }
    if (matched) *matched = m;
    return best;
  }
  throw ConvergenceError("taylor_moment_seed: no order could be matched");
}

}  // namespace detail

GraphScheme fit_moment_match(int k, int m, const MomentOptions& opts) {
  std::mt19937_64 rng(opts.seed);
  GraphScheme out;
  if (k == 1) {
    if (m > 2) throw InfeasibleError("fit_moment_match: one product reaches order 2 at most");
    out = restricted_skeleton(1);
    out.y = {0.0, 1.0, 0.5};
    out.meta.m_order = 2;
  } else if (k == 2) {
    if (m > 4) throw InfeasibleError("fit_moment_match: two products reach order 4 at most");
    out = restricted_skeleton(2);
    out.h[1] = {0.0, 1.0 / 3.0, 0.25};
    out.g[1] = {0.0, 0.0, 1.0};
    out.y = {0.0, 1.0, 0.5, 1.0};
    out.meta.m_order = 4;
  } else if (k == 3 && m == 7) {
    throw InfeasibleError(
        "fit_moment_match: no three-product scheme of this shape evaluates a degree-7 polynomial "
        "(leading coefficient forced to zero)");
  } else {
    GraphScheme skeleton;
    PolishTarget target{m, 1.0, 0.0};
    if (k == 3 && m == 8) {
      skeleton = mask_eq5();
    } else if (k == 4 && m == 14) {
      skeleton = mask_k4();
      target.c_tol = 4e-17;
    } else if (k == 5 && m == 14) {
      skeleton = opts.init ? *opts.init : published_k5_scheme();
      if (skeleton.k != 5) throw ArgumentError("fit_moment_match: init must have k=5");
    } else {
      throw ArgumentError("fit_moment_match: unsupported (k, m) = (" + std::to_string(k) + ", " + std::to_string(m) + ")");
    }
    const bool masked = k < 5;
    const ParamLayout layout = masked ? ParamLayout::from_mask(skeleton) : ParamLayout::restricted(k);
    if (!masked) skeleton = normalize_scheme(skeleton);
    const LdGraph base(skeleton, layout);
    const std::vector<long double> x0 = base.params();
    const auto found = solve_moments(base, layout, m, masked ? 6 : 1, opts.max_iterations, rng, masked ? nullptr : &x0);
    if (found.empty()) throw ConvergenceError("fit_moment_match: moment equations did not converge");
    // Prefer the solution whose first unmatched coefficient is closest to Taylor.
    std::size_t pick = 0;
    long double best = INFINITY;
    for (std::size_t i = 0; i < found.size(); ++i) {
      LdGraph g = base;
      g.set_params(found[i].x);
      std::vector<long double> b;
      detail::monomial_jacobian_ld(g, layout, static_cast<std::size_t>(m + 1), b, nullptr);
      const long double e = std::abs((b[static_cast<std::size_t>(m + 1)] - 1.0L / (m + 1)) * (m + 1));
      if (e < best) {
        best = e;
        pick = i;
      }
    }
    LdGraph g = base;
    g.set_params(found[pick].x);
    out = g.to_scheme(skeleton);
    if (opts.polish) out = ulp_polish(out, layout, target, rng);
    out.meta = SchemeMeta{};
    out.meta.m_order = m;
    out.meta.order_plus = k >= 4;
  }
  out.k = k;
  out.meta.degree = 1 << k;
  out.meta.target = "-log(1-x)";
  out.validate();
  return out;
}

}  // namespace graphlogm
