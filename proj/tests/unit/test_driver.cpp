#include <doctest.h>

#include <cmath>
#include <random>

#include "graphlogm/bench.hpp"
#include "graphlogm/driver.hpp"
#include "oracles.hpp"

using namespace graphlogm;
using graphlogm::test::u;

namespace {

/// V B V^{-1} for block-diagonal B.
template <Scalar T>
Matrix<T> similar(const Matrix<T>& v, const Matrix<T>& b) {
  OpCounter c;
  return gemm(gemm(v, b), lu_factor(v).inverse(c));
}

Matrix<double> block3(double d, double re, double im) {
  return Matrix<double>(3, {d, 0, 0, 0, re, im, 0, -im, re});
}

}  // namespace

TEST_CASE("logm of the identity") {
  LogmReport rep;
  const auto l = logm(Matrix<double>::identity(6), {}, &rep);
  CHECK(l == Matrix<double>::zeros(6));
  CHECK(rep.s == 0);
  CHECK(rep.k_selected == 1);
  CHECK(rep.alpha_used == 0.0);
}

TEST_CASE("logm against a constructed logarithm") {
  std::mt19937_64 rng(41);
  const auto v = Matrix<double>::identity(3) + test::random_matrix(3, rng, -0.3, 0.3);
  // exp of [[re, im], [-im, re]] is e^re times a rotation by im.
  const double e2 = std::exp(-0.2);
  const auto expb = Matrix<double>(3, {std::exp(0.3), 0, 0, 0, e2 * std::cos(0.4), e2 * std::sin(0.4), 0,
                                       -e2 * std::sin(0.4), e2 * std::cos(0.4)});
  const auto a = similar(v, expb);
  const auto lref = similar(v, block3(0.3, -0.2, 0.4));
  LogmReport rep;
  const auto l = logm(a, {}, &rep);
  const double k1 = test::kappa1(v);
  CHECK(relative_error(l, lref) <= 1e3 * k1 * k1 * u);
  CHECK(rep.alpha_used <= rep.theta_selected);

  // Complex arithmetic path on the same spectrum.
  Matrix<cplx> vc = to_complex(v);
  vc(0, 1) += cplx(0, 0.2);
  Matrix<cplx> dc(3), lc(3);
  const cplx lam[3] = {0.3, cplx(-0.2, 0.4), cplx(-0.2, -0.4)};
  for (int i = 0; i < 3; ++i) {
    dc(i, i) = std::exp(lam[i]);
    lc(i, i) = lam[i];
  }
  const auto lz = logm(similar(vc, dc));
  const double kc = test::kappa1(vc);
  CHECK(relative_error(lz, similar(vc, lc)) <= 1e3 * kc * kc * u);
}

TEST_CASE("logm round trip through the exponential") {
  std::mt19937_64 rng(42);
  const std::size_t n = 32;
  const auto a = Matrix<double>::identity(n) + test::scaled_to_norm1(test::random_matrix(n, rng), 0.5);
  const auto l = logm(a);
  CHECK(onenorm(test::expm_ref(l) - a) <= 1e-13);
}

TEST_CASE("logm with square roots") {
  std::mt19937_64 rng(43);
  const auto a = test::random_spd(12, rng, 0.01, 100.0);
  LogmReport rep;
  const auto l = logm(a, {}, &rep);
  CHECK(rep.s >= 1);
  CHECK(rep.eval_products == rep.k_selected - 1);
  CHECK(rep.square_products == 0);
  CHECK(rep.alpha_used <= rep.theta_selected);
  CHECK(test::rel_diff1(test::expm_ref(l), a) <= 1e-12);


  const auto b = test::random_spd(12, rng, 0.2, 5.0);
  const auto lb = logm(b);
  CHECK(relative_error(logm(gemm(b, b)), Matrix<double>(2.0 * lb)) <= 1e4 * u);
}

TEST_CASE("product accounting without square roots") {
  std::mt19937_64 rng(44);
  const auto a = Matrix<double>::identity(8) + test::scaled_to_norm1(test::random_matrix(8, rng), 0.05);
  LogmReport rep;
  logm(a, {}, &rep);
  CHECK(rep.s == 0);
  CHECK(rep.square_products == 1);
  CHECK(rep.eval_products == rep.k_selected - 1);
  CHECK(rep.counter.products == rep.k_selected);
}

TEST_CASE("Paterson-Stockmeyer evaluator") {
  std::mt19937_64 rng(45);
  const auto a = test::random_spd(10, rng, 0.1, 10.0);
  LogmOptions opts;
  opts.evaluator = Evaluator::paterson_stockmeyer;
  opts.theta_table = taylor_theta_table(shipped_theta_table());
  LogmReport rep;
  const auto l = logm(a, opts, &rep);
  CHECK(relative_error(l, logm(a)) <= 1e3 * u);
  CHECK(rep.alpha_used <= rep.theta_selected);
}

TEST_CASE("balancing does not change the result") {
  std::mt19937_64 rng(46);
  const auto a = test::random_spd(10, rng, 0.5, 2.0);
  LogmOptions off;
  off.balance = false;
  CHECK(relative_error(logm(a), logm(a, off)) <= 1e3 * u);

  // Badly scaled similarity of the same matrix.
  Matrix<double> d = Matrix<double>::identity(10);
  for (std::size_t i = 0; i < 10; ++i) d(i, i) = std::ldexp(1.0, static_cast<int>(2 * i));
  Matrix<double> di = Matrix<double>::identity(10);
  for (std::size_t i = 0; i < 10; ++i) di(i, i) = 1.0 / d(i, i);
  const auto b = gemm(gemm(d, a), di);
  LogmReport rep;
  const auto lb = logm(b, {}, &rep);
  CHECK(rep.balanced);
  CHECK(relative_error(gemm(gemm(di, lb), d), logm(a)) <= 1e3 * u);
}

TEST_CASE("diagonal scaling leaves the selection unchanged") {
  const auto a = Matrix<double>(4, {1.7, 0, 0, 0, 0, 0.6, 0, 0, 0, 0, 2.5, 0, 0, 0, 0, 0.9});
  const auto d = Matrix<double>(4, {1, 0, 0, 0, 0, 4, 0, 0, 0, 0, 0.125, 0, 0, 0, 0, 1024});
  const auto di = Matrix<double>(4, {1, 0, 0, 0, 0, 0.25, 0, 0, 0, 0, 8, 0, 0, 0, 0, 1.0 / 1024});
  LogmOptions off;
  off.balance = false;
  LogmReport r1, r2;
  logm(a, off, &r1);
  logm(gemm(gemm(d, a), di), off, &r2);
  CHECK(r1.s == r2.s);
  CHECK(r1.k_selected == r2.k_selected);
}

TEST_CASE("alpha_estimate") {
  OpCounter c;
  const auto z = Matrix<double>::zeros(3);
  PowerNorms<double> nz(z, nullptr, c);
  CHECK(alpha_estimate(nz, 8, 0.01) == 0.0);

  const auto d = Matrix<double>(2, {0.1, 0, 0, -0.05});
  PowerNorms<double> nd(d, nullptr, c);
  CHECK(alpha_estimate(nd, 8, 1e-6) == doctest::Approx(0.1).epsilon(1e-14));

  Matrix<double> x = Matrix<double>::identity(4);
  for (std::size_t i = 0; i + 1 < 4; ++i) x(i, i + 1) = 5.0;
  x *= 0.3;
  const auto x2 = gemm(x, x);
  for (int m : {4, 5, 8}) {
    Matrix<double> p = Matrix<double>::identity(4);
    double brute = 0.0;
    for (int e = 1; e <= m + 1; ++e) {
      p = gemm(p, x);
      if (e >= m) brute = std::max(brute, std::pow(onenorm(p), 1.0 / e));
    }
    PowerNorms<double> nx(x, &x2, c);
    const double a = alpha_estimate(nx, m, 1e-6);
    CHECK(a <= brute * (1 + 1e-12));
    CHECK(a >= brute / 10);
  }
}

TEST_CASE("select_order") {
  const ThetaTable pub = published_theta_table();
  OpCounter c;
  SUBCASE("tiny argument picks the first scheme") {
    const auto x = 1e-9 * Matrix<double>::identity(4);
    const auto x2 = gemm(x, x);
    PowerNorms<double> n(x, &x2, c);
    CHECK(select_order(n, pub, 9, 1e-9).k == 1);
  }
  SUBCASE("rough start index") {
    CHECK(rough_min_index(0.20, pub, 9) == 4);
    CHECK(rough_min_index(1e-9, pub, 9) == 1);
  }
  SUBCASE("cached top estimate settles the choice without new estimates") {
    const auto x = 0.3 * Matrix<double>::identity(4);
    const auto x2 = gemm(x, x);
    PowerNorms<double> n(x, &x2, c);
    const double top = std::pow(n.estimate(pub.row(9).m), 1.0 / pub.row(9).m);
    const int before = n.estimations();
    const Selection sel = select_order(n, pub, 9, top);
    CHECK(sel.k == 6);
    CHECK(n.estimations() == before);
  }
}

TEST_CASE("unbalance_postprocess") {
  std::mt19937_64 rng(47);
  const auto l = test::random_matrix(4, rng);
  BalanceTransform id;
  id.scale = {1, 1, 1, 1};
  id.permutation = {0, 1, 2, 3};
  CHECK(unbalance_postprocess(l, id) == l);
  BalanceTransform t;
  t.scale = {1, std::ldexp(1.0, 20), 1, 1};
  t.permutation = {0, 1, 2, 3};
  const auto r = unbalance_postprocess(l, t);
  CHECK(r(1, 0) == l(1, 0) * std::ldexp(1.0, 20));
  CHECK(r(0, 1) == l(0, 1) * std::ldexp(1.0, -20));
  CHECK(r(1, 1) == l(1, 1));
}

TEST_CASE("logm errors") {
  CHECK_THROWS_AS(logm(Matrix<double>(2, {1, 2, 2, 4})), SingularMatrixError);
  CHECK_THROWS_AS(logm(Matrix<double>(2, {-1, 0, 0, 2})), DomainError);
  LogmOptions opts;
  opts.maxiter = 1;
  LogmReport rep;
  CHECK_THROWS_AS(logm(Matrix<double>(2, {1e6, 0, 0, 2}), opts, &rep), ConvergenceError);
  CHECK(rep.s >= 1);
}

TEST_CASE("test families") {
  for (char f : {'a', 'b', 'c', 'd'}) {
    FamilyOptions fo;
    fo.n = 8;
    const TestMatrix t1 = make_test_matrix(f, 5, fo), t2 = make_test_matrix(f, 5, fo);
    CHECK(t1.a == t2.a);
    CHECK(t1.log_ref == t2.log_ref);
    LogmReport rep;
    const auto l = logm(t1.a, {}, &rep);
    CHECK(rep.alpha_used <= rep.theta_selected);
    CHECK(relative_error(l, t1.log_ref) <= 1e-10);
  }
}
