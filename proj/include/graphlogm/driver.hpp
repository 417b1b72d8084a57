#pragma once

#include <map>
#include <optional>

#include "graphlogm/analysis.hpp"
#include "graphlogm/balance.hpp"
#include "graphlogm/matrix.hpp"

namespace graphlogm {

/// How the truncated series is evaluated once the order is chosen.
enum class Evaluator {
  graph,               ///< Degree-optimal schemes, k products.
  paterson_stockmeyer  ///< Taylor polynomial of degree m_k by Paterson–Stockmeyer.
};

struct LogmOptions {
  int max_k = 9;
  int maxiter = 40;
  bool balance = true;
  bool spectrum_check = true;       ///< eig_small pre-check when n <= eig_cap.
  std::size_t eig_cap = 512;
  std::optional<ThetaTable> theta_table;  ///< Defaults to the shipped table.
  Evaluator evaluator = Evaluator::graph;
};

struct LogmReport {
  int s = 0;
  int k_selected = 0;
  int m_selected = 0;
  double theta_selected = 0.0;
  double alpha_used = 0.0;
  OpCounter counter;
  int eval_products = 0;    ///< Products spent after selection, (A-I)^2 excluded.
  int square_products = 0;  ///< 1 if (A-I)^2 had to be formed by a product.
  int norm_estimations = 0;
  bool balanced = false;
};

/// Norms of powers of X = A - I for one fixed A. Powers are routed through
/// X^2 when it is available; results are cached per exponent.
template <Scalar T>
class PowerNorms {
 public:
  PowerNorms(const Matrix<T>& x, const Matrix<T>* x2, OpCounter& counter);

  /// Supplies X^2 after construction; cached estimates stay valid.
  void set_square(const Matrix<T>* x2);

  double norm1() const { return n1_; }
  bool has_square() const { return x2_ != nullptr; }
  /// sqrt(||X^2||), or ||X|| without a square.
  double root2() const;
  /// Upper bound on ||X^p||^{1/p} from ||X^2|| and ||X||.
  double power_bound(int p) const;
  /// ||X^p|| estimated (exact for p <= 2).
  double estimate(int p);
  bool cached(int p) const { return cache_.count(p) != 0; }
  int estimations() const { return estimations_; }

 private:
  const Matrix<T>& x_;
  const Matrix<T>* x2_;
  OpCounter& counter_;
  double n1_ = 0.0;
  double n2_ = 0.0;
  std::map<int, double> cache_;
  int estimations_ = 0;
};

/// max(||X^m||^{1/m}, ||X^{m+1}||^{1/(m+1)}) with the estimate-skipping rules:
/// a cheap bound replaces an estimate when it already lies below theta, and
/// the (m+1) term is skipped once the m term exceeds theta.
template <Scalar T>
double alpha_estimate(PowerNorms<T>& norms, int m, double theta);

struct Selection {
  int k = 0;
  double alpha = 0.0;
};

/// Smallest admissible scheme index, assuming alpha for the top row already
/// passed. `alpha_top` is that value.
template <Scalar T>
Selection select_order(PowerNorms<T>& norms, const ThetaTable& table, int max_k, double alpha_top);

/// L = T L T^{-1} for the balancing transform.
template <Scalar T>
Matrix<T> unbalance_postprocess(const Matrix<T>& l, const BalanceTransform& t);

/// Principal logarithm by inverse scaling and squaring with polynomial
/// approximation. Throws DomainError, SingularMatrixError or ConvergenceError.
template <Scalar T>
Matrix<T> logm(const Matrix<T>& a, const LogmOptions& opts = {}, LogmReport* report = nullptr);

/// First index worth testing when no power norm has been estimated: the
/// smallest j with sqrt(||(A-I)^2||) <= theta_j, lowered through the
/// {1,2,3,4,4,5,5,6,6} table to allow for nonnormality.
int rough_min_index(double root2, const ThetaTable& table, int max_k);

}  // namespace graphlogm
