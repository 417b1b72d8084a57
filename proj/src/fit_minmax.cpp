#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <random>

#include "graphlogm/fit.hpp"
#include "fit_internal.hpp"

namespace graphlogm {

namespace detail {

LdGraph::LdGraph(const GraphScheme& s, const ParamLayout& layout) : k(s.k), layout_(&layout) {
  for (int j = 0; j < k; ++j) {
    h.emplace_back(s.h[j].begin(), s.h[j].end());
    g.emplace_back(s.g[j].begin(), s.g[j].end());
  }
  y.assign(s.y.begin(), s.y.end());
}

long double& LdGraph::at(const ParamLayout::Slot& sl) {
  switch (sl.block) {
    case ParamLayout::Block::H: return h[sl.row][sl.col];
    case ParamLayout::Block::G: return g[sl.row][sl.col];
    default: return y[sl.col];
  }
}

std::vector<long double> LdGraph::params() const {
  std::vector<long double> x;
  for (const auto& sl : layout_->slots()) x.push_back(const_cast<LdGraph*>(this)->at(sl));
  return x;
}

void LdGraph::set_params(const std::vector<long double>& x) {
  for (std::size_t i = 0; i < x.size(); ++i) at(layout_->slots()[i]) = x[i];
}

GraphScheme LdGraph::to_scheme(const GraphScheme& like) const {
  GraphScheme s = like;
  for (int j = 0; j < k; ++j) {
    for (std::size_t i = 0; i < h[j].size(); ++i) s.h[j][i] = static_cast<double>(h[j][i]);
    for (std::size_t i = 0; i < g[j].size(); ++i) s.g[j][i] = static_cast<double>(g[j][i]);
  }
  for (std::size_t i = 0; i < y.size(); ++i) s.y[i] = static_cast<double>(y[i]);
  return s;
}

LC LdGraph::value(LC x) const {
  std::vector<LC> p{LC(1), x};
  auto combine = [&](const std::vector<long double>& c) {
    LC acc(0);
    for (std::size_t i = 0; i < c.size(); ++i) acc += c[i] * p[i];
    return acc;
  };
  for (int j = 0; j < k; ++j) p.push_back(combine(h[j]) * combine(g[j]));
  return combine(y);
}

LC LdGraph::value_and_gradient(LC x, std::vector<LC>& grad) const {
  const auto kk = static_cast<std::size_t>(k);
  std::vector<LC> p{LC(1), x}, l(kk), r(kk);
  auto combine = [&](const std::vector<long double>& c) {
    LC acc(0);
    for (std::size_t i = 0; i < c.size(); ++i) acc += c[i] * p[i];
    return acc;
  };
  for (std::size_t j = 0; j < kk; ++j) {
    l[j] = combine(h[j]);
    r[j] = combine(g[j]);
    p.push_back(l[j] * r[j]);
  }
  const LC val = combine(y);
  std::vector<LC> adj(y.begin(), y.end());
  std::vector<std::vector<LC>> al(kk), ar(kk);
  std::vector<LC> aL(kk), aR(kk);
  for (std::size_t j = kk; j-- > 0;) {
    const LC a = adj[j + 2];
    aL[j] = a * r[j];
    aR[j] = a * l[j];
    for (std::size_t i = 0; i < j + 2; ++i) adj[i] += h[j][i] * aL[j] + g[j][i] * aR[j];
  }
  grad.resize(layout_->size());
  for (std::size_t q = 0; q < layout_->size(); ++q) {
    const auto& sl = layout_->slots()[q];
    const auto col = static_cast<std::size_t>(sl.col);
    switch (sl.block) {
      case ParamLayout::Block::H: grad[q] = aL[static_cast<std::size_t>(sl.row)] * p[col]; break;
      case ParamLayout::Block::G: grad[q] = aR[static_cast<std::size_t>(sl.row)] * p[col]; break;
      default: grad[q] = p[col]; break;
    }
  }
  return val;
}

}  // namespace detail

namespace {

using detail::LC;
using detail::LdGraph;
using LMat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using LVec = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

constexpr long double kPi = 3.141592653589793238462643383279502884L;

LC target(LC z) { return -std::log(LC(1) - z); }

struct Samples {
  std::vector<LC> z, f;
};

Samples boundary_samples(double radius, int n) {
  Samples s;
  for (int i = 0; i < n; ++i) {
    const long double t = 2.0L * kPi * (i + 0.5L) / n;
    const LC z = static_cast<long double>(radius) * LC(std::cos(t), std::sin(t));
    s.z.push_back(z);
    s.f.push_back(target(z));
  }
  return s;
}

std::vector<long double> abs_residuals(const LdGraph& gr, const Samples& sm) {
  std::vector<long double> a(sm.z.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::abs(gr.value(sm.z[i]) - sm.f[i]);
  return a;
}

long double smoothed(const std::vector<long double>& a, long double p) {
  long double m = 0;
  for (long double v : a) m = std::max(m, v);
  if (!(m > 0) || !std::isfinite(m)) return m;
  long double s = 0;
  for (long double v : a) s += std::pow(v / m, p);
  return m * std::pow(s / a.size(), 1.0L / p);
}

long double max_of(const std::vector<long double>& a) {
  long double m = 0;
  for (long double v : a) {
    if (!std::isfinite(v)) return std::numeric_limits<long double>::infinity();
    m = std::max(m, v);
  }
  return m;
}

struct RunOutcome {
  std::vector<long double> best_x;
  long double best_max = std::numeric_limits<long double>::infinity();
  int iterations = 0;
  bool converged = false;
};

// IRLS with a p-ramp; each reweighted problem takes one Levenberg–Marquardt step.
RunOutcome irls_lm(LdGraph gr, const Samples& sm, const FitOptions& opts) {
  const std::size_t np = gr.params().size();
  const std::size_t ns = sm.z.size();
  RunOutcome out;
  std::vector<long double> x = gr.params();
  long double p = 2.0L, lam = 1e-3L;
  int accepted_at_p = 0;
  std::vector<LC> grad;
  LMat a(2 * ns + np, np);
  LVec rhs(2 * ns + np);
  for (int it = 0; it < opts.max_iterations; ++it) {
    out.iterations = it + 1;
    gr.set_params(x);
    std::vector<LC> res(ns);
    std::vector<std::vector<LC>> jac(ns);
    std::vector<long double> ar(ns);
    for (std::size_t i = 0; i < ns; ++i) {
      res[i] = gr.value_and_gradient(sm.z[i], jac[i]) - sm.f[i];
      ar[i] = std::abs(res[i]);
    }
    const long double m = max_of(ar);
    if (!std::isfinite(m)) throw ConvergenceError("fit_minmax: non-finite residual");
    if (m < out.best_max) {
      out.best_max = m;
      out.best_x = x;
    }
    if (opts.target > 0 && m <= opts.target) {
      out.converged = true;
      break;
    }
    const long double cur = smoothed(ar, p);
    if (opts.verbose && it % 200 == 0) std::fprintf(stderr, "  it %d p %.1Lf lam %.2Le max %.3Le\n", it, p, lam, m);
    for (std::size_t i = 0; i < ns; ++i) {
      const long double w = m > 0 ? std::pow(ar[i] / m, (p - 2) / 2) : 1.0L;
      for (std::size_t q = 0; q < np; ++q) {
        a(2 * i, q) = w * jac[i][q].real();
        a(2 * i + 1, q) = w * jac[i][q].imag();
      }
      rhs(2 * i) = -w * res[i].real();
      rhs(2 * i + 1) = -w * res[i].imag();
    }
    LVec diag(np);
    for (std::size_t q = 0; q < np; ++q) diag(q) = a.topRows(2 * ns).col(q).norm() + 1e-30L;
    bool accepted = false;
    for (int tries = 0; tries < 40; ++tries) {
      a.bottomRows(np).setZero();
      for (std::size_t q = 0; q < np; ++q) a(2 * ns + q, q) = std::sqrt(lam) * diag(q);
      rhs.tail(np).setZero();
      const LVec dx = a.householderQr().solve(rhs);
      std::vector<long double> xn(x);
      for (std::size_t q = 0; q < np; ++q) xn[q] += dx(q);
      gr.set_params(xn);
      const long double f = smoothed(abs_residuals(gr, sm), p);
      if (std::isfinite(f) && f < cur) {
        x = std::move(xn);
        lam = std::max(lam / 3, 1e-15L);
        accepted = true;
        break;
      }
      lam *= 3;
      if (lam > 1e20L) break;
    }
    if (accepted) ++accepted_at_p;
    if (!accepted || accepted_at_p >= 25) {
      if (p >= opts.p_max) {
        if (!accepted) {
          out.converged = true;
          break;
        }
      } else {
        p = std::min<long double>(p * 1.5L, opts.p_max);
        accepted_at_p = 0;
        lam = std::max(lam, 1e-6L);
      }
    }
  }
  gr.set_params(x);
  const long double m = max_of(abs_residuals(gr, sm));
  if (m < out.best_max) {
    out.best_max = m;
    out.best_x = x;
  }
  return out;
}

}  // namespace

GraphScheme default_minmax_seed(int k, double radius, std::uint64_t seed);

FitResult fit_minmax(const FitProblem& problem, const FitOptions& opts) {
  if (!(problem.radius > 0.0 && problem.radius < 1.0)) throw ArgumentError("fit_minmax: radius must be in (0,1)");
  if (problem.k < 1) throw ArgumentError("fit_minmax: k must be >= 1");
  if (problem.samples < 8) throw ArgumentError("fit_minmax: need at least 8 samples");
  GraphScheme seed = opts.init ? *opts.init : default_minmax_seed(problem.k, problem.radius, opts.seed);
  if (seed.k != problem.k) throw ArgumentError("fit_minmax: seed has wrong k");
  if (problem.normalize_first_row) seed = normalize_scheme(seed);
  bool leading_one = true;
  for (int j = 1; j < seed.k; ++j)
    leading_one = leading_one && seed.h[j].back() == 1.0 && seed.g[j].back() == 1.0;
  const ParamLayout layout = problem.identity_free ? (leading_one && seed.identity_free() ? ParamLayout::gauged(problem.k)
                                                                                        : ParamLayout::restricted(problem.k))
                                                : ParamLayout::from_mask([&] {
                                                    GraphScheme m = restricted_skeleton(problem.k);
                                                    for (int j = 1; j < m.k; ++j) {
                                                      for (auto& v : m.h[j]) v = NAN;
                                                      for (auto& v : m.g[j]) v = NAN;
                                                    }
                                                    for (int i = 2; i < m.k + 2; ++i) m.y[i] = NAN;
                                                    return m;
                                                  }());
  const Samples sm = boundary_samples(problem.radius, problem.samples);

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<long double> normal(0.0L, 1.0L);
  FitResult result;
  std::vector<long double> best_x;
  long double best = std::numeric_limits<long double>::infinity();
  LdGraph base(seed, layout);
  const std::vector<long double> x0 = base.params();
  for (int r = 0; r <= opts.restarts; ++r) {
    std::vector<long double> start = r == 0 ? x0 : best_x;
    if (r > 0)
      for (auto& v : start) v = v * (1 + opts.perturbation * normal(rng)) + 0.1L * opts.perturbation * normal(rng);
    LdGraph gr = base;
    gr.set_params(start);
    const RunOutcome o = irls_lm(gr, sm, opts);
    result.iterations += o.iterations;
    result.restarts_used = r;
    if (opts.verbose) std::fprintf(stderr, "restart %d: max error %.3Le after %d iterations\n", r, o.best_max, o.iterations);
    if (o.best_max < best) {
      best = o.best_max;
      best_x = o.best_x;
      result.converged = o.converged;
    }
    if (opts.target > 0 && best <= opts.target) break;
  }
  LdGraph fin = base;
  fin.set_params(best_x);
  result.scheme = fin.to_scheme(seed);
  result.scheme.meta.radius = problem.radius;
  result.scheme.meta.degree = 1 << problem.k;
  result.achieved_max_error = boundary_max_error(result.scheme, problem.radius, problem.samples);
  // Certificate: denser boundary plus interior points.
  double cert = boundary_max_error(result.scheme, problem.radius, opts.certificate_samples);
  for (int i = 0; i < 100; ++i) {
    const long double rho = problem.radius * std::sqrt((i + 0.5L) / 100);
    const long double t = 2.399963229728653L * i;
    const LC z = rho * LC(std::cos(t), std::sin(t));
    cert = std::max(cert, static_cast<double>(std::abs(scalar_graph_eval(result.scheme, z) - target(z))));
  }
  result.certified_max_error = cert;
  return result;
}

}  // namespace graphlogm
