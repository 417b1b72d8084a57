#include "graphlogm/driver.hpp"

#include <array>
#include <cmath>

#include "graphlogm/eig.hpp"
#include "graphlogm/errors.hpp"
#include "graphlogm/normest.hpp"
#include "graphlogm/scheme.hpp"
#include "graphlogm/sqrtm.hpp"

namespace graphlogm {

template <Scalar T>
PowerNorms<T>::PowerNorms(const Matrix<T>& x, const Matrix<T>* x2, OpCounter& counter)
    : x_(x), x2_(nullptr), counter_(counter), n1_(onenorm(x)) {
  set_square(x2);
}

template <Scalar T>
void PowerNorms<T>::set_square(const Matrix<T>* x2) {
  x2_ = x2;
  if (x2_) {
    n2_ = onenorm(*x2_);
    cache_[2] = n2_;
  }
}

template <Scalar T>
double PowerNorms<T>::root2() const {
  return x2_ ? std::sqrt(n2_) : n1_;
}

template <Scalar T>
double PowerNorms<T>::power_bound(int p) const {
  if (p <= 1 || !x2_) return n1_;
  if (n2_ == 0.0) return 0.0;
  if (p % 2 == 0) return std::sqrt(n2_);
  if (n1_ == 0.0) return 0.0;
  // (||X^2||^{(p-1)/2} ||X||)^{1/p} in logs to avoid overflow.
  return std::exp((0.5 * (p - 1) * std::log(n2_) + std::log(n1_)) / p);
}

template <Scalar T>
double PowerNorms<T>::estimate(int p) {
  if (p < 1) throw ArgumentError("PowerNorms: exponent must be positive");
  if (p == 1) return n1_;
  if (auto it = cache_.find(p); it != cache_.end()) return it->second;
  double v;
  if (!x2_) {
    v = est_power_norm(x_, p, counter_);
  } else if (p % 2 == 0) {
    v = est_power_norm(*x2_, p / 2, counter_);
  } else {
    v = est_power_norm(*x2_, (p - 1) / 2, x_, counter_);
  }
  ++estimations_;
  cache_[p] = v;
  return v;
}

template <Scalar T>
double alpha_estimate(PowerNorms<T>& norms, int m, double theta) {
  if (m < 1) throw ArgumentError("alpha_estimate: order must be positive");
  auto root = [](double v, int p) { return v == 0.0 ? 0.0 : std::pow(v, 1.0 / p); };
  auto term = [&](int p) {
    if (norms.cached(p) || p == 1) return root(norms.estimate(p), p);
    const double b = norms.power_bound(p);
    return b <= theta ? b : root(norms.estimate(p), p);
  };
  const double t1 = term(m);
  if (t1 > theta) return t1;
  double b = norms.power_bound(m + 1);
  if (norms.cached(m)) b = std::min(b, root(norms.estimate(m) * norms.norm1(), m + 1));
  if (norms.cached(m + 1)) b = root(norms.estimate(m + 1), m + 1);
  if (b <= theta) return std::max(t1, b);
  return std::max(t1, root(norms.estimate(m + 1), m + 1));
}

int rough_min_index(double root2, const ThetaTable& table, int max_k) {
  static constexpr std::array<int, 9> kTabMin{1, 2, 3, 4, 4, 5, 5, 6, 6};
  if (root2 <= table.row(1).theta) return 1;
  int j = max_k;
  for (int i = 1; i <= max_k; ++i) {
    if (root2 <= table.row(i).theta) {
      j = i;
      break;
    }
  }
  j = kTabMin[static_cast<std::size_t>(std::min(j, 9) - 1)];
  return std::min(std::max(j, 2), max_k);
}

template <Scalar T>
Selection select_order(PowerNorms<T>& norms, const ThetaTable& table, int max_k, double alpha_top) {
  auto theta = [&](int j) { return table.row(j).theta; };
  auto order = [&](int j) { return table.row(j).m; };
  auto first_passing = [&](double v) {
    for (int j = 1; j <= max_k; ++j)
      if (v <= theta(j)) return j;
    return max_k;
  };
  const int top = order(max_k);

  int min_in;
  if (norms.cached(top)) {
    min_in = first_passing(std::pow(norms.estimate(top), 1.0 / top));
    if (norms.cached(top + 1))
      min_in = std::max(min_in, first_passing(std::pow(norms.estimate(top + 1), 1.0 / (top + 1))));
  } else {
    min_in = rough_min_index(norms.root2(), table, max_k);
  }

  // Bounds on alpha_{m_j} from ||(A-I)^2|| and ||A-I|| alone.
  int max_in = max_k;
  double alpha_max = alpha_top;
  for (int j = 1; j <= max_k; ++j) {
    const int m = order(j);
    const double b = norms.power_bound(m % 2 == 0 ? m + 1 : m);
    if (b <= theta(j)) {
      max_in = j;
      alpha_max = b;
      break;
    }
  }
  if (min_in >= max_in) return {max_in, alpha_max};

  for (int j = min_in; j < max_in; ++j) {
    const double a = alpha_estimate(norms, order(j), theta(j));
    if (a <= theta(j)) return {j, a};
    if (a <= theta(j + 1)) return {j + 1, a};
  }
  return {max_in, alpha_max};
}

template <Scalar T>
Matrix<T> unbalance_postprocess(const Matrix<T>& l, const BalanceTransform& t) {
  return t.is_identity() ? l : unbalance(l, t);
}

namespace {

template <Scalar T>
void check_spectrum(const Matrix<T>& a, std::size_t cap) {
  const auto ev = eig_small(a, cap);
  const double scale = onenorm(a);
  if (!touches_negative_axis(ev, scale)) return;
  const double tol = 64.0 * kUnitRoundoff * std::max(scale, 1e-300);
  for (const cplx& l : ev)
    if (std::abs(l) <= tol) throw SingularMatrixError("logm: matrix is singular");
  throw DomainError("logm: eigenvalue on the closed negative real axis");
}

}  // namespace

template <Scalar T>
Matrix<T> logm(const Matrix<T>& a, const LogmOptions& opts, LogmReport* report) {
  if (opts.max_k < 1 || opts.max_k > 9) throw ArgumentError("logm: max_k must lie in 1..9");
  if (opts.maxiter < 0) throw ArgumentError("logm: maxiter must be non-negative");
  LogmReport local;
  LogmReport& rep = report ? *report : local;
  rep = LogmReport{};
  const std::size_t n = a.size();
  if (n == 0) return a;

  const ThetaTable table = opts.theta_table ? *opts.theta_table : shipped_theta_table();
  table.validate();
  const int max_k = std::min({opts.max_k, table.max_k(), builtin_max_k()});
  if (max_k < 1) throw ArgumentError("logm: empty threshold table");
  const double theta_top = table.row(max_k).theta;
  const int m_top = table.row(max_k).m;

  if (opts.spectrum_check && n <= opts.eig_cap) check_spectrum(a, opts.eig_cap);

  Balanced<T> bal;
  if (opts.balance) {
    bal = balance(a);
  } else {
    bal.matrix = a;
    bal.transform.scale.assign(n, 1.0);
    for (std::size_t i = 0; i < n; ++i) bal.transform.permutation.push_back(i);
  }
  rep.balanced = opts.balance && !bal.transform.is_identity();

  OpCounter& c = rep.counter;
  Matrix<T> cur = std::move(bal.matrix);
  Matrix<T> x = cur;
  x.shift_diagonal(T(-1));
  std::optional<Matrix<T>> x2;
  std::optional<PowerNorms<T>> norms;
  norms.emplace(x, nullptr, c);
  double alpha_top = norms->norm1();
  int spent = 0;  // estimations by discarded PowerNorms objects

  if (alpha_top > theta_top) {
    for (;;) {
      alpha_top = alpha_estimate(*norms, m_top, theta_top);
      if (alpha_top <= theta_top) break;
      if (rep.s >= opts.maxiter) {
        rep.norm_estimations = spent + norms->estimations();
        throw ConvergenceError("logm: square root limit reached before alpha fell below theta");
      }
      spent += norms->estimations();
      norms.reset();
      Matrix<T> prev = std::move(cur);
      try {
        cur = sqrt_db(prev, 0.0, 50, c);
      } catch (...) {
        rep.norm_estimations = spent;
        throw;
      }
      ++rep.s;
      x = cur;
      x.shift_diagonal(T(-1));
      // (A - I)^2 = A_prev - 2A + I, no product needed.
      prev.axpy(T(-2), cur);
      prev.shift_diagonal(T(1));
      x2 = std::move(prev);
      norms.emplace(x, &*x2, c);
    }
  }

  if (!x2) {
    x2 = mat_mul(x, x, c);
    rep.square_products = 1;
    norms->set_square(&*x2);
  }
  const Selection sel = select_order(*norms, table, max_k, alpha_top);
  rep.norm_estimations = spent + norms->estimations();
  rep.k_selected = sel.k;
  rep.alpha_used = sel.alpha;
  rep.m_selected = table.row(sel.k).m;
  rep.theta_selected = table.row(sel.k).theta;

  // log(I + X) = -S(-X) where S approximates -log(1 - x).
  const long before = c.products;
  const Matrix<T> neg = -x;
  Matrix<T> l;
  if (opts.evaluator == Evaluator::graph) {
    l = eval_degopt(builtin_scheme(sel.k), neg, c, &*x2);
  } else {
    l = paterson_stockmeyer(log_taylor_coefficients(rep.m_selected), neg, c, &*x2);
  }
  rep.eval_products = static_cast<int>(c.products - before);
  l *= T(-std::ldexp(1.0, rep.s));
  return unbalance_postprocess(l, bal.transform);
}

template class PowerNorms<double>;
template class PowerNorms<cplx>;
template double alpha_estimate(PowerNorms<double>&, int, double);
template double alpha_estimate(PowerNorms<cplx>&, int, double);
template Selection select_order(PowerNorms<double>&, const ThetaTable&, int, double);
template Selection select_order(PowerNorms<cplx>&, const ThetaTable&, int, double);
template Matrix<double> unbalance_postprocess(const Matrix<double>&, const BalanceTransform&);
template Matrix<cplx> unbalance_postprocess(const Matrix<cplx>&, const BalanceTransform&);
template Matrix<double> logm(const Matrix<double>&, const LogmOptions&, LogmReport*);
template Matrix<cplx> logm(const Matrix<cplx>&, const LogmOptions&, LogmReport*);

}  // namespace graphlogm
