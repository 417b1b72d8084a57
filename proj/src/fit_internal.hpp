#pragma once

#include <complex>
#include <vector>

#include "graphlogm/fit.hpp"

namespace graphlogm::detail {

using LC = std::complex<long double>;

/// Long double working copy of a scheme with a parameter view.
class LdGraph {
 public:
  LdGraph(const GraphScheme& s, const ParamLayout& layout);

  std::vector<long double> params() const;
  void set_params(const std::vector<long double>& x);
  GraphScheme to_scheme(const GraphScheme& like) const;

  LC value(LC x) const;
  /// Value plus partials with respect to the layout's free slots.
  LC value_and_gradient(LC x, std::vector<LC>& grad) const;

  int k;
  std::vector<std::vector<long double>> h, g;
  std::vector<long double> y;

 private:
  long double& at(const ParamLayout::Slot& sl);
  const ParamLayout* layout_;
};

}  // namespace graphlogm::detail

#include <functional>

namespace graphlogm::detail {

struct LmResult {
  std::vector<long double> x;
  long double norm = 0;  ///< Final residual 2-norm.
  int iterations = 0;
};

/// Residuals and Jacobian (row per residual) at x.
using ResidualFn =
    std::function<void(const std::vector<long double>& x, std::vector<long double>& r, std::vector<std::vector<long double>>& j)>;

/// Levenberg–Marquardt with Marquardt column scaling, long double throughout.
LmResult levenberg_marquardt(const ResidualFn& fn, std::vector<long double> x, int max_iterations,
                             long double tol = 0);

}  // namespace graphlogm::detail

namespace graphlogm::detail {

/// Monomial coefficients b_0..b_n of the working graph and their partials with
/// respect to the graph's free slots (db[q][i]).
void monomial_jacobian_ld(const LdGraph& g, const ParamLayout& layout, std::size_t n, std::vector<long double>& b,
                          std::vector<std::vector<long double>>* db);

}  // namespace graphlogm::detail

#include <random>

namespace graphlogm::detail {

/// Gauged scheme matching the Taylor coefficients of -log(1-x) to the highest
/// order reachable by multi-start LM (at most max_order, 0 for no limit);
/// among converged starts the one with the smallest error on |x| = radius.
GraphScheme taylor_moment_seed(int k, double radius, std::mt19937_64& rng, int max_order, int tries_per_order,
                               int* matched);

}  // namespace graphlogm::detail
