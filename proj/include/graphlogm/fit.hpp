#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "graphlogm/scheme.hpp"

namespace graphlogm {

/// z(x) for the 1x1 argument [x]; same recurrence as eval_degopt.
template <class T>
T scalar_graph_eval(const GraphScheme& s, T x) {
  std::vector<T> p{T(1), x};
  auto combine = [&](const std::vector<double>& c) {
    T acc(0);
    for (std::size_t i = 0; i < c.size(); ++i) acc += static_cast<real_t<T>>(c[i]) * p[i];
    return acc;
  };
  for (int j = 0; j < s.k; ++j) {
    const T l = combine(s.h[static_cast<std::size_t>(j)]);
    const T r = combine(s.g[static_cast<std::size_t>(j)]);
    p.push_back(l * r);
  }
  return combine(s.y);
}

/// Partials of z(x) with respect to every stored coefficient, same shapes as
/// the scheme's H, G and y.
struct GraphGradient {
  cplx value;
  std::vector<std::vector<cplx>> h;
  std::vector<std::vector<cplx>> g;
  std::vector<cplx> y;
};

/// One reverse sweep over the graph.
GraphGradient graph_gradient(const GraphScheme& s, cplx x);

/// Which stored coefficients an optimizer may move. Fixed ones keep the value
/// they have in the scheme the layout is applied to.
class ParamLayout {
 public:
  enum class Block : std::uint8_t { H, G, Y };
  struct Slot {
    Block block;
    int row;
    int col;
  };

  ParamLayout() = default;
  explicit ParamLayout(std::vector<Slot> slots) : slots_(std::move(slots)) {}

  /// Normalized first row, zero identity terms, y_1 = 0, y_2 = 1: k^2 + 2k - 2 free.
  static ParamLayout restricted(int k);
  /// As restricted, additionally fixing the leading entries h_{j,j+1} = g_{j,j+1} = 1
  /// of rows 2..k, which removes the scaling invariances.
  static ParamLayout gauged(int k);
  /// Every slot whose value in `mask` is NaN is free.
  static ParamLayout from_mask(const GraphScheme& mask);

  std::size_t size() const noexcept { return slots_.size(); }
  const std::vector<Slot>& slots() const noexcept { return slots_; }

  std::vector<double> pack(const GraphScheme& s) const;
  void unpack(const std::vector<double>& x, GraphScheme& s) const;
  /// Gradient entries for the free slots.
  std::vector<cplx> select(const GraphGradient& g) const;

 private:
  std::vector<Slot> slots_;
};

/// Scheme skeleton for the restricted/gauged layouts: first row normalized,
/// leading entries one, everything else zero.
GraphScheme restricted_skeleton(int k);

struct FitProblem {
  int k = 5;
  double radius = 0.25;
  int samples = 256;  ///< Equispaced points on |z| = radius.
  bool normalize_first_row = true;  ///< h_1 = g_1 = (0, 1).
  bool identity_free = true;        ///< No identity terms in any factor.
};

struct FitOptions {
  int restarts = 8;
  std::uint64_t seed = 1;
  int max_iterations = 4000;   ///< LM iterations per restart.
  double p_max = 32.0;
  int certificate_samples = 1024;
  double target = 0.0;          ///< Stop early once the max error falls below this.
  double perturbation = 0.05;   ///< Relative size of restart perturbations.
  std::optional<GraphScheme> init;
  bool verbose = false;
};

struct FitResult {
  GraphScheme scheme;
  double achieved_max_error = 0.0;   ///< On the fitting samples.
  double certified_max_error = 0.0;  ///< Boundary at certificate_samples plus 100 interior points.
  int iterations = 0;
  int restarts_used = 0;
  bool converged = false;
};

/// Max |z(x) + log(1-x)| over n equispaced points on |x| = r, in long double.
double boundary_max_error(const GraphScheme& s, double radius, int n);

/// Smoothed min-max fit of -log(1-x) on the disk of the given radius.
FitResult fit_minmax(const FitProblem& problem, const FitOptions& opts = {});

struct MomentOptions {
  std::optional<GraphScheme> init;
  int max_iterations = 400;
  bool polish = true;  ///< Ulp search after rounding to double.
  std::uint64_t seed = 7;
};

/// Scheme matching the Taylor coefficients of -log(1-x) through order m.
/// Supported: k = 1, 2 (exact formulas), (3, 8), (4, 14+), (5, 14+).
/// (3, 7) with a vanishing leading coefficient is reported infeasible.
GraphScheme fit_moment_match(int k, int m, const MomentOptions& opts = {});

struct GenerateOptions {
  int candidates = 3;            ///< Seeds tried for k >= 6.
  std::uint64_t seed = 1;
  double stability_cap = 256.0;  ///< In units of u; candidates above it rank last.
  int digits = 300;
  std::ostream* log = nullptr;
};

/// Builds the bundled scheme for index k with its order, radius and theta
/// filled in. k <= 5 uses fit_moment_match at the tabulated orders; k >= 6 takes
/// the best of several moment-matched min-max seeds on the disk of the
/// published threshold radius. A candidate is admissible when its stability
/// indicator is within the cap and the tail coefficients satisfy
/// |(1/i - b_i) i| <= 1; throws ConvergenceError if none is.
GraphScheme generate_scheme(int k, const GenerateOptions& opts = {});

/// Monomial coefficients b_0..b_n of the scheme in long double, and their
/// derivatives with respect to the free slots of `layout` (row per slot).
struct MonomialJacobian {
  std::vector<long double> b;
  std::vector<std::vector<long double>> db;
};
MonomialJacobian monomial_jacobian(const GraphScheme& s, const ParamLayout& layout, std::size_t n);

}  // namespace graphlogm
