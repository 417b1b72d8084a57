#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "graphlogm/driver.hpp"
#include "graphlogm/matrix.hpp"

namespace graphlogm {

/// ||L_hat - L_ref||_2 / ||L_ref||_2. Exact SVD for n <= 64, power iteration
/// above. Throws ArgumentError if L_ref is zero.
template <Scalar T>
double relative_error(const Matrix<T>& l_hat, const Matrix<T>& l_ref);

/// Spectral norm by power iteration on A^* A.
template <Scalar T>
double norm2_power(const Matrix<T>& a, int max_steps = 2000, double tol = 1e-14);

/// Spectral norm from the singular values.
template <Scalar T>
double norm2_svd(const Matrix<T>& a);

/// Synthetic test families:
///   a: I + A, A dense random with ||A||_1 = 0.5
///   b: V exp(D) V^{-1} with kappa_2(V) fixed and D block diagonal
///      (real eigenvalues and rotation blocks)
///   c: d I + N, N random upper bidiagonal (nonnormal)
///   d: Q^T D Q, symmetric positive definite
/// Every case carries its logarithm, computed in extended precision from the
/// construction.
struct TestMatrix {
  std::string id;
  char family = 'a';
  Matrix<double> a;
  Matrix<double> log_ref;
  double kappa = 1.0;  ///< kappa_2(V) for family b, 1 otherwise.
};

struct FamilyOptions {
  std::size_t n = 16;
  double kappa = 10.0;      ///< Family b.
  double superdiag = 5.0;   ///< Family c: upper bound of |N| entries.
  double diag = 1.0;        ///< Family c: d.
  double spread = 2.0;      ///< Family b, d: eigenvalue log spread.
};

TestMatrix make_test_matrix(char family, std::uint64_t seed, const FamilyOptions& opts, int index = 0);
std::vector<TestMatrix> gen_test_matrices(char family, std::uint64_t seed, int count, const FamilyOptions& opts);

/// log(I + X) by its Taylor series in long double; needs ||X||_1 <= 0.6.
Matrix<double> log1p_series_ref(const Matrix<double>& a);

struct BenchRecord {
  std::string matrix_id;
  std::size_t n = 0;
  std::string method;
  double er = 0.0;
  long products = 0;
  long divisions = 0;
  double equivalent_m = 0.0;
  double seconds = 0.0;
  int s = 0;
  int k = 0;
  int m = 0;
  double alpha = 0.0;
  double theta = 0.0;
  int eval_products = 0;
  int square_products = 0;

  bool operator==(const BenchRecord&) const = default;
};

/// Method tags: "graph" (degree-optimal schemes) and "ps" (Paterson–Stockmeyer
/// at the same order).
BenchRecord run_one(const TestMatrix& t, const std::string& method, const LogmOptions& base = {});
std::vector<BenchRecord> run_bench(const std::vector<TestMatrix>& set, const std::vector<std::string>& methods,
                                   const LogmOptions& base = {});

void write_bench_csv(std::ostream& os, const std::vector<BenchRecord>& records);
std::vector<BenchRecord> read_bench_csv(std::istream& is);

struct ProfilePoint {
  double alpha = 0.0;
  double p = 0.0;
};

struct ProfileCurve {
  std::string method;
  std::vector<ProfilePoint> points;
};

/// Er' = max(Er, u); for each matrix the best Er' over methods; p(a) is the
/// share of matrices with Er' <= a * best, for a = 1.0, 1.1, ..., 5.0.
/// Throws InputError if some matrix lacks a record for some method.
std::vector<ProfileCurve> performance_profile(const std::vector<BenchRecord>& records);

void write_profile_csv(std::ostream& os, const std::vector<ProfileCurve>& curves);

/// Line chart of profile curves.
std::string profile_svg(const std::vector<ProfileCurve>& curves);
/// Log-scale scatter of Er per matrix, one series per method.
std::string error_svg(const std::vector<BenchRecord>& records);

/// Decimal with 17 significant digits.
std::string csv_number(double v);

}  // namespace graphlogm
