#include <doctest.h>

#include <cmath>
#include <random>

#include "graphlogm/analysis.hpp"
#include "graphlogm/fit.hpp"
#include "oracles.hpp"

using namespace graphlogm;
using graphlogm::test::u;

namespace {

GraphScheme random_scheme(int k, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  GraphScheme s;
  s.k = k;
  for (int j = 0; j < k; ++j) {
    std::vector<double> h(static_cast<std::size_t>(j) + 2), g(h.size());
    for (double& v : h) v = d(rng);
    for (double& v : g) v = d(rng);
    s.h.push_back(h);
    s.g.push_back(g);
  }
  s.y.resize(static_cast<std::size_t>(k) + 2);
  for (double& v : s.y) v = d(rng);
  s.meta.degree = 1 << k;
  return s;
}

/// Node values P_1..P_{k+2} at x.
std::vector<cplx> node_values(const GraphScheme& s, cplx x) {
  std::vector<cplx> p{1.0, x};
  for (int j = 0; j < s.k; ++j) {
    cplx l = 0, r = 0;
    for (std::size_t i = 0; i < s.h[j].size(); ++i) {
      l += s.h[j][i] * p[i];
      r += s.g[j][i] * p[i];
    }
    p.push_back(l * r);
  }
  return p;
}

void probe_error(GraphScheme s, cplx x, double& worst) {
  const GraphGradient gg = graph_gradient(s, x);
  const double h = 1e-6;
  auto check = [&](double& slot, cplx analytic) {
    const double keep = slot;
    slot = keep + h;
    const cplx zp = scalar_graph_eval(s, x);
    slot = keep - h;
    const cplx zm = scalar_graph_eval(s, x);
    slot = keep;
    const cplx fd = (zp - zm) / (2 * h);
    worst = std::max(worst, std::abs(fd - analytic) / (1 + std::abs(analytic)));
  };
  for (std::size_t j = 0; j < s.h.size(); ++j)
    for (std::size_t i = 0; i < s.h[j].size(); ++i) {
      check(s.h[j][i], gg.h[j][i]);
      check(s.g[j][i], gg.g[j][i]);
    }
  for (std::size_t i = 0; i < s.y.size(); ++i) check(s.y[i], gg.y[i]);
}

}  // namespace

TEST_CASE("scalar_graph_eval") {
  const GraphScheme& p = published_k5_scheme();
  CHECK(scalar_graph_eval(p, 0.0) == 0.0);
  const double ref = static_cast<double>(-std::log1p(-0.2L));
  CHECK(std::abs(scalar_graph_eval(p, 0.2) - ref) <= 10 * u * ref);
  GraphScheme id = builtin_scheme(1);
  id.y = {0, 1, 0};
  CHECK(scalar_graph_eval(id, 0.3) == 0.3);
}

TEST_CASE("graph_gradient") {
  std::mt19937_64 rng(31);
  SUBCASE("output layer") {
    const GraphScheme s = random_scheme(4, rng);
    const cplx x(0.3, -0.2);
    const auto gg = graph_gradient(s, x);
    const auto p = node_values(s, x);
    for (std::size_t i = 0; i < p.size(); ++i) CHECK(std::abs(gg.y[i] - p[i]) <= 1e-15 * (1 + std::abs(p[i])));
    CHECK(std::abs(gg.value - scalar_graph_eval(s, x)) <= 1e-15);
  }
  SUBCASE("k=2 second row by hand") {
    const GraphScheme s = random_scheme(2, rng);
    const cplx x(0.4, 0.1);
    const auto p = node_values(s, x);
    const auto gg = graph_gradient(s, x);
    cplx right = 0, left = 0;
    for (std::size_t i = 0; i < 3; ++i) {
      right += s.g[1][i] * p[i];
      left += s.h[1][i] * p[i];
    }
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(std::abs(gg.h[1][i] - s.y[3] * p[i] * right) <= 1e-14);
      CHECK(std::abs(gg.g[1][i] - s.y[3] * p[i] * left) <= 1e-14);
    }
  }
  SUBCASE("finite differences") {
    std::uniform_real_distribution<double> d(-0.5, 0.5);
    std::uniform_int_distribution<int> kd(1, 6);
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
      const GraphScheme s = random_scheme(kd(rng), rng);
      probe_error(s, cplx(d(rng), d(rng)), worst);
    }
    CHECK(worst <= 1e-6);
  }
}

TEST_CASE("parameter layouts") {
  for (int k = 2; k <= 6; ++k) {
    CHECK(ParamLayout::restricted(k).size() == static_cast<std::size_t>(k * k + 2 * k - 2));
    CHECK(ParamLayout::gauged(k).size() == static_cast<std::size_t>(k * k + 2 * k - 2 - 2 * (k - 1)));
  }
  std::mt19937_64 rng(32);
  GraphScheme s = restricted_skeleton(4);
  const auto layout = ParamLayout::restricted(4);
  std::vector<double> x(layout.size());
  std::uniform_real_distribution<double> d(-1, 1);
  for (double& v : x) v = d(rng);
  layout.unpack(x, s);
  CHECK(layout.pack(s) == x);
  CHECK(s.first_row_normalized());
  CHECK(s.identity_free());
}

TEST_CASE("fit_minmax at a tiny radius approaches the Taylor polynomial") {
  const double r = 1e-4;
  FitProblem prob;
  prob.k = 1;
  prob.radius = r;
  prob.samples = 64;
  FitOptions opts;
  opts.restarts = 1;
  const FitResult res = fit_minmax(prob, opts);
  const auto b = monomial_expand(res.scheme).to_doubles();
  CHECK(b[1] == 1.0);
  CHECK(std::abs(b[2] - 0.5) <= 1e-10);
  CHECK(res.achieved_max_error <= r * r * r / 3 * 1.01);
}

TEST_CASE("fit_minmax past capacity returns a large residual") {
  FitProblem prob;
  prob.k = 1;
  prob.radius = 0.9;
  prob.samples = 64;
  FitOptions opts;
  opts.restarts = 1;
  const FitResult res = fit_minmax(prob, opts);
  CHECK(res.converged);
  CHECK(res.achieved_max_error > 1e3 * u);
  CHECK(res.certified_max_error <= 2 * res.achieved_max_error);
}

TEST_CASE("fit_minmax certificate at k=3") {
  FitProblem prob;
  prob.k = 3;
  prob.radius = 0.05;
  prob.samples = 128;
  FitOptions opts;
  opts.restarts = 2;
  const FitResult res = fit_minmax(prob, opts);
  CHECK(std::isfinite(res.achieved_max_error));
  CHECK(res.certified_max_error <= 2 * res.achieved_max_error);
  CHECK(res.scheme.first_row_normalized());
  CHECK(res.scheme.identity_free());
  CHECK(boundary_max_error(res.scheme, prob.radius, 4 * prob.samples) <= 2 * res.achieved_max_error);
}

TEST_CASE("fit_moment_match") {
  const GraphScheme t2 = fit_moment_match(1, 2);
  CHECK(t2.y == std::vector<double>{0, 1, 0.5});

  const auto e3 = taylor_match_errors(monomial_expand(fit_moment_match(3, 8)), 8);
  for (int i = 1; i <= 8; ++i) CHECK(std::abs(e3[i]) <= 2 * u);

  const GraphScheme s4 = fit_moment_match(4, 14);
  const BigSeries b4 = monomial_expand(s4);
  const auto e4 = taylor_match_errors(b4, 16);
  for (int i = 1; i <= 14; ++i) CHECK(std::abs(e4[i]) <= 2 * u);
  CHECK(std::abs(e4[15]) > 2 * u);
  CHECK(tail_coeff_check(b4, 14).pass);

  CHECK_THROWS_AS(fit_moment_match(3, 7), InfeasibleError);
  CHECK_THROWS_AS(fit_moment_match(6, 20), ArgumentError);
}
