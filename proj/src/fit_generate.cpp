#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>

#include "fit_internal.hpp"
#include "graphlogm/analysis.hpp"
#include "graphlogm/errors.hpp"
#include "graphlogm/fit.hpp"

namespace graphlogm {

namespace {

struct Candidate {
  GraphScheme scheme;
  double theta = 0.0;
  double stability = 0.0;
  double tail = 0.0;
  std::uint64_t seed = 0;

  bool admissible(double cap) const { return stability <= cap && tail <= 1.0; }
};

bool better(const Candidate& a, const Candidate& b, double cap) {
  const bool ok_a = a.admissible(cap), ok_b = b.admissible(cap);
  if (ok_a != ok_b) return ok_a;
  if (ok_a) return a.theta > b.theta;
  return std::max(a.tail, a.stability) < std::max(b.tail, b.stability);
}

}  // namespace

GraphScheme generate_scheme(int k, const GenerateOptions& opts) {
  if (k < 1 || k > 9) throw ArgumentError("generate_scheme: k must lie in 1..9");
  static constexpr int kOrders[] = {2, 4, 8, 14, 14};
  GraphScheme out;
  if (k <= 5) {
    out = fit_moment_match(k, kOrders[k - 1]);
    out.meta.theta = scheme_theta(out, out.meta.m_order, opts.digits).theta;
    out.meta.provenance = k == 5 ? "published_k5.scheme refined in the last bits to match order 14"
                                 : "moment matched through order " + std::to_string(out.meta.m_order);
    return out;
  }

  const double radius = published_theta_table().row(k).theta;
  std::optional<Candidate> best;
  for (int c = 0; c < opts.candidates; ++c) {
    std::mt19937_64 rng(opts.seed + static_cast<std::uint64_t>(c));
    int matched = 0;
    Candidate cand;
    cand.seed = opts.seed + static_cast<std::uint64_t>(c);
    try {
      cand.scheme = detail::taylor_moment_seed(k, radius, rng, 0, 2, &matched);
    } catch (const ConvergenceError&) {
      continue;
    }
    cand.scheme.meta = SchemeMeta{};
    cand.scheme.meta.m_order = matched;
    cand.scheme.meta.degree = 1 << k;
    cand.scheme.meta.radius = radius;
    try {
      cand.theta = scheme_theta(cand.scheme, matched, opts.digits).theta;
    } catch (const TruncationError&) {
      continue;
    }
    cand.stability = stability_indicator(cand.scheme, opts.digits).max_in_u();
    cand.tail = tail_coeff_check(cand.scheme, matched, opts.digits).max;
    if (opts.log)
      *opts.log << "k=" << k << " candidate " << c << ": order " << matched << ", theta " << cand.theta
                << ", stability " << cand.stability << "u, tail " << cand.tail << '\n';
    if (!best || better(cand, *best, opts.stability_cap)) best = std::move(cand);
  }
  if (!best) throw ConvergenceError("generate_scheme: no candidate converged");
  if (!best->admissible(opts.stability_cap))
    throw ConvergenceError("generate_scheme: no candidate for k=" + std::to_string(k) +
                           " meets the stability and tail limits");
  out = std::move(best->scheme);
  out.meta.theta = best->theta;
  out.meta.provenance = "moment matched min-max seed through order " + std::to_string(out.meta.m_order) +
                        " on radius " + std::to_string(radius) + ", seed " +
                        std::to_string(best->seed) + " (best of " + std::to_string(opts.candidates) + ")";
  return out;
}

}  // namespace graphlogm
