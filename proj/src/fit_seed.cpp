#include "fit_internal.hpp"
#include "graphlogm/fit.hpp"

namespace graphlogm {

// Taylor polynomial of degree 3(k-1) written as a Horner scheme in X^3 inside
// the degree-optimal form: P_3 = X^2, P_4 = X^3, later rows add one chunk each.
GraphScheme taylor_horner_seed(int k) {
  GraphScheme s = restricted_skeleton(k);
  if (k == 1) {
    s.y = {0.0, 1.0, 0.5};
    return s;
  }
  auto c = [](int i) { return 1.0 / i; };
  if (k == 2) {
    s.h[1] = {0.0, 0.0, 1.0};
    s.g[1] = {0.0, 1.0, 0.0};
    s.y = {0.0, 1.0, c(2), c(3)};
    return s;
  }
  const int d = 3 * (k - 1);
  s.h[1] = {0.0, 0.0, 1.0};
  s.g[1] = {0.0, 1.0, 0.0};
  for (int j = 3; j <= k; ++j) {
    auto& h = s.h[static_cast<std::size_t>(j - 1)];
    auto& g = s.g[static_cast<std::size_t>(j - 1)];
    std::fill(h.begin(), h.end(), 0.0);
    std::fill(g.begin(), g.end(), 0.0);
    const int a = d - 3 * (j - 2) + 1;
    h[1] = c(a);
    h[2] = c(a + 1);
    h[3] = c(a + 2);
    if (j > 3) h[static_cast<std::size_t>(j)] = 1.0;
    g[3] = 1.0;
  }
  std::fill(s.y.begin(), s.y.end(), 0.0);
  s.y[1] = 1.0;
  s.y[2] = c(2);
  s.y[3] = c(3);
  s.y.back() = 1.0;
  return s;
}

}  // namespace graphlogm

namespace graphlogm {

GraphScheme default_minmax_seed(int k, double radius, std::uint64_t seed) {
  if (k <= 2) return taylor_horner_seed(k);
  std::mt19937_64 rng(seed);
  try {
    return detail::taylor_moment_seed(k, radius, rng, 0, 3, nullptr);
  } catch (const ConvergenceError&) {
    return taylor_horner_seed(k);
  }
}

}  // namespace graphlogm
