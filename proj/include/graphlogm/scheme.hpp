#pragma once

#include <string>
#include <vector>

#include "graphlogm/matrix.hpp"

namespace graphlogm {

/// Metadata carried alongside the coefficients of an evaluation graph.
struct SchemeMeta {
  int m_order = 0;        ///< Taylor order matched.
  bool order_plus = false;  ///< One further coefficient approximately matched ("14+").
  int degree = 0;         ///< Polynomial degree, 2^k.
  double radius = 0.0;    ///< Disk radius used when fitting, 0 if not fitted.
  double theta = 0.0;     ///< Backward-error threshold for this scheme, 0 if unknown.
  std::string target = "-log(1-x)";
  std::string provenance;  ///< Free-form comment lines, written as the file header.
};

/// Coefficients of a degree-optimal evaluation graph:
///
///   P_1 = I, P_2 = X,
///   P_{j+2} = (sum_i h[j-1][i] P_{i+1}) (sum_i g[j-1][i] P_{i+1}),  j = 1..k,
///   z = sum_i y[i] P_{i+1}.
///
/// Row j-1 of H and G holds j+1 entries; y holds k+2.
struct GraphScheme {
  int k = 0;
  std::vector<std::vector<double>> h;
  std::vector<std::vector<double>> g;
  std::vector<double> y;
  SchemeMeta meta;

  /// Throws ArgumentError if row lengths or finiteness are violated.
  void validate() const;
  /// First row is (0,1)x(0,1), so P_3 = X^2.
  bool first_row_normalized() const;
  /// Every row has zero identity coefficient on both factors.
  bool identity_free() const;
  /// Number of stored doubles, (k+1)(k+2) - 2 + k + 2.
  std::size_t coefficient_count() const;
};

/// z(X) with exactly k matrix products. If `square` is given it must equal X^2
/// and replaces the first product.
template <Scalar T>
Matrix<T> eval_degopt(const GraphScheme& s, const Matrix<T>& x, OpCounter& counter,
                      const Matrix<T>* square = nullptr);

/// Equivalent scheme with h_1 = g_1 = (0, 1). Throws NormalizationError if
/// h_{1,2} g_{1,2} = 0.
GraphScheme normalize_scheme(const GraphScheme& s);

/// Text form: "# " comment lines, then key/value fields and H/G/y rows.
std::string save_scheme(const GraphScheme& s);
GraphScheme load_scheme(const std::string& text);
GraphScheme load_scheme_file(const std::string& path);
void save_scheme_file(const std::string& path, const GraphScheme& s);

/// Schemes bundled with the library. k in 1..9 are the schemes the driver uses;
/// published_k5 is the published k=5 coefficient set kept verbatim for analysis.
const GraphScheme& builtin_scheme(int k);
const GraphScheme& published_k5_scheme();
int builtin_max_k();

/// Fixed low-order Taylor-matching schemes (k = 1..4) used for k <= 4.
struct TaylorScheme {
  int k = 0;
  GraphScheme graph;
};

const TaylorScheme& taylor_scheme(int k);

/// Approximation of -log(I - X) by the k-th low-order scheme, k products.
template <Scalar T>
Matrix<T> eval_taylor_low(int k, const Matrix<T>& x, OpCounter& counter,
                          const Matrix<T>* square = nullptr);

/// Taylor coefficients 1/i of -log(1-x), entries 0..m.
std::vector<double> log_taylor_coefficients(int m);

/// Product count of Paterson–Stockmeyer for degree m with block size tau.
int ps_products(int m, int tau);
/// Block size minimizing ps_products; ties go to the smaller tau.
int ps_best_tau(int m);

/// sum_i c[i] X^i by Paterson–Stockmeyer with the cheapest block size. A given
/// `square` must equal X^2 and saves one product when the block size exceeds 1.
template <Scalar T>
Matrix<T> paterson_stockmeyer(const std::vector<double>& c, const Matrix<T>& x, OpCounter& counter,
                              const Matrix<T>* square = nullptr);

}  // namespace graphlogm
