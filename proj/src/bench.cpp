#include "graphlogm/bench.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "graphlogm/errors.hpp"
#include "graphlogm/matio.hpp"

namespace graphlogm {

namespace {

using LdMat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

template <Scalar T>
Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> to_eigen(const Matrix<T>& a) {
  const auto n = static_cast<Eigen::Index>(a.size());
  Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = a(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  return m;
}

LdMat to_ld(const Matrix<double>& a) { return to_eigen(a).cast<long double>(); }

Matrix<double> from_ld(const LdMat& m) {
  const auto n = static_cast<std::size_t>(m.rows());
  Matrix<double> a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      a(i, j) = static_cast<double>(m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
  return a;
}

Eigen::MatrixXd random_orthogonal(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Eigen::MatrixXd g(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = nd(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  return q;
}

std::string make_id(char family, std::size_t n, int index) {
  return std::string(1, family) + "_n" + std::to_string(n) + "_" + std::to_string(index);
}

TestMatrix family_a(std::mt19937_64& rng, const FamilyOptions& o) {
  std::normal_distribution<double> nd;
  Matrix<double> a(o.n);
  for (double& v : a.entries()) v = nd(rng);
  a *= 0.5 / onenorm(a);
  a.shift_diagonal(1.0);
  // The reference uses the rounded matrix, so X = A - I is exact here.
  Matrix<double> x = a;
  x.shift_diagonal(-1.0);
  return {"", 'a', a, log1p_series_ref(x), 1.0};
}

TestMatrix family_b(std::mt19937_64& rng, const FamilyOptions& o) {
  const std::size_t n = o.n;
  const auto en = static_cast<Eigen::Index>(n);
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  const Eigen::MatrixXd u = random_orthogonal(n, rng);
  const Eigen::MatrixXd w = random_orthogonal(n, rng);
  Eigen::VectorXd sv(en);
  for (Eigen::Index i = 0; i < en; ++i)
    sv(i) = n == 1 ? 1.0 : std::pow(o.kappa, static_cast<double>(i) / static_cast<double>(n - 1));
  const Eigen::MatrixXd v = u * sv.asDiagonal() * w.transpose();

  LdMat lam = LdMat::Zero(en, en);
  LdMat ex = LdMat::Zero(en, en);
  for (Eigen::Index i = 0; i < en;) {
    const long double a = static_cast<long double>(o.spread * (ud(rng) - 0.5));
    if (i + 1 < en && ud(rng) < 1.0 / 3.0) {
      const long double b = static_cast<long double>(0.1 + 2.4 * ud(rng));
      lam(i, i) = a;
      lam(i, i + 1) = -b;
      lam(i + 1, i) = b;
      lam(i + 1, i + 1) = a;
      const long double r = std::exp(a);
      ex(i, i) = r * std::cos(b);
      ex(i, i + 1) = -r * std::sin(b);
      ex(i + 1, i) = r * std::sin(b);
      ex(i + 1, i + 1) = r * std::cos(b);
      i += 2;
    } else {
      lam(i, i) = a;
      ex(i, i) = std::exp(a);
      i += 1;
    }
  }
  const LdMat vl = v.cast<long double>();
  const LdMat vinv = vl.partialPivLu().inverse();
  return {"", 'b', from_ld(vl * ex * vinv), from_ld(vl * lam * vinv), o.kappa};
}

TestMatrix family_c(std::mt19937_64& rng, const FamilyOptions& o) {
  const std::size_t n = o.n;
  std::uniform_real_distribution<double> ud(0.5, 1.0);
  Matrix<double> a(n);
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = o.diag;
    if (i + 1 < n) a(i, i + 1) = o.superdiag * ud(rng);
  }
  // log(dI + N) = log(d) I + sum_j (-1)^{j+1} (N/d)^j / j, finite since N is nilpotent.
  LdMat nd = to_ld(a);
  nd.diagonal().setZero();
  nd /= static_cast<long double>(o.diag);
  const auto en = static_cast<Eigen::Index>(n);
  LdMat l = LdMat::Identity(en, en) * std::log(static_cast<long double>(o.diag));
  LdMat p = LdMat::Identity(en, en);
  for (std::size_t j = 1; j < n; ++j) {
    p = p * nd;
    l += ((j % 2 == 1) ? 1.0L : -1.0L) / static_cast<long double>(j) * p;
  }
  return {"", 'c', a, from_ld(l), 1.0};
}

TestMatrix family_d(std::mt19937_64& rng, const FamilyOptions& o) {
  const std::size_t n = o.n;
  const auto en = static_cast<Eigen::Index>(n);
  std::uniform_real_distribution<double> ud(-1.0, 1.0);
  const LdMat q = random_orthogonal(n, rng).cast<long double>();
  LdMat d = LdMat::Zero(en, en), ld = LdMat::Zero(en, en);
  for (Eigen::Index i = 0; i < en; ++i) {
    ld(i, i) = static_cast<long double>(o.spread * ud(rng));
    d(i, i) = std::exp(ld(i, i));
  }
  LdMat a = q.transpose() * d * q;
  a = (0.5L * (a + a.transpose())).eval();
  LdMat l = q.transpose() * ld * q;
  l = (0.5L * (l + l.transpose())).eval();
  return {"", 'd', from_ld(a), from_ld(l), 1.0};
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, ',')) out.push_back(cur);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

long parse_long(const std::string& s) {
  std::size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(s, &pos);
  } catch (const std::exception&) {
    throw ParseError("cannot parse integer '" + s + "'");
  }
  if (pos != s.size()) throw ParseError("cannot parse integer '" + s + "'");
  return v;
}

constexpr const char* kBenchHeader =
    "matrix_id,n,method,er,products,divisions,equivalent_m,seconds,s,k,m,alpha,theta,eval_products,square_products";

}  // namespace

std::string csv_number(double v) { return format_double(v); }

template <Scalar T>
double norm2_svd(const Matrix<T>& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>> svd(to_eigen(a));
  return svd.singularValues()(0);
}

template <Scalar T>
double norm2_power(const Matrix<T>& a, int max_steps, double tol) {
  const std::size_t n = a.size();
  if (n == 0) return 0.0;
  std::vector<T> x(n), y(n), z(n);
  // Deterministic start with no special alignment.
  for (std::size_t i = 0; i < n; ++i) x[i] = T(1.0 + 0.1 * std::sin(static_cast<double>(i) + 1.0));
  auto normalize = [](std::vector<T>& v) {
    double s = 0.0;
    for (const T& e : v) s += std::norm(e);
    s = std::sqrt(s);
    if (s > 0.0)
      for (T& e : v) e /= s;
    return s;
  };
  normalize(x);
  double sigma = 0.0;
  for (int it = 0; it < max_steps; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      T acc{};
      for (std::size_t j = 0; j < n; ++j) acc += a(i, j) * x[j];
      y[i] = acc;
    }
    for (std::size_t j = 0; j < n; ++j) {
      T acc{};
      for (std::size_t i = 0; i < n; ++i) {
        if constexpr (is_complex_v<T>)
          acc += std::conj(a(i, j)) * y[i];
        else
          acc += a(i, j) * y[i];
      }
      z[j] = acc;
    }
    const double next = std::sqrt(normalize(z));
    x.swap(z);
    if (next == 0.0) return 0.0;
    const bool done = std::abs(next - sigma) <= tol * next;
    sigma = next;
    if (done) break;
  }
  return sigma;
}

template <Scalar T>
double relative_error(const Matrix<T>& l_hat, const Matrix<T>& l_ref) {
  if (l_hat.size() != l_ref.size()) throw DimensionError("relative_error: size mismatch");
  const Matrix<T> d = l_hat - l_ref;
  auto norm2 = [](const Matrix<T>& m) { return m.size() <= 64 ? norm2_svd(m) : norm2_power(m); };
  const double den = norm2(l_ref);
  if (den == 0.0) throw ArgumentError("relative_error: reference is zero");
  return norm2(d) / den;
}

Matrix<double> log1p_series_ref(const Matrix<double>& a) {
  if (onenorm(a) > 0.6) throw ArgumentError("log1p_series_ref: norm too large for the series");
  const LdMat x = to_ld(a);
  LdMat p = x;
  LdMat l = x;
  for (int j = 2; j < 400; ++j) {
    p = p * x;
    const long double pn = p.cwiseAbs().colwise().sum().maxCoeff();
    l += ((j % 2 == 1) ? 1.0L : -1.0L) / j * p;
    if (pn / j < 1e-24L) break;
  }
  return from_ld(l);
}

TestMatrix make_test_matrix(char family, std::uint64_t seed, const FamilyOptions& opts, int index) {
  if (opts.n == 0) throw ArgumentError("make_test_matrix: n must be positive");
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(family), static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(opts.n)};
  std::mt19937_64 rng(seq);
  TestMatrix t;
  switch (family) {
    case 'a': t = family_a(rng, opts); break;
    case 'b': t = family_b(rng, opts); break;
    case 'c': t = family_c(rng, opts); break;
    case 'd': t = family_d(rng, opts); break;
    default: throw ArgumentError(std::string("unknown test family '") + family + "'");
  }
  t.id = make_id(family, opts.n, index);
  return t;
}

std::vector<TestMatrix> gen_test_matrices(char family, std::uint64_t seed, int count, const FamilyOptions& opts) {
  std::vector<TestMatrix> out;
  for (int i = 0; i < count; ++i) out.push_back(make_test_matrix(family, seed, opts, i));
  return out;
}

BenchRecord run_one(const TestMatrix& t, const std::string& method, const LogmOptions& base) {
  LogmOptions opts = base;
  if (method == "graph") {
    opts.evaluator = Evaluator::graph;
  } else if (method == "ps") {
    // Plain Taylor polynomials have their own, smaller thresholds.
    opts.evaluator = Evaluator::paterson_stockmeyer;
    if (base.theta_table) {
      opts.theta_table = taylor_theta_table(*base.theta_table);
    } else {
      static const ThetaTable kTaylor = taylor_theta_table(shipped_theta_table());
      opts.theta_table = kTaylor;
    }
  } else {
    throw ArgumentError("unknown method '" + method + "'");
  }
  LogmReport rep;
  const auto t0 = std::chrono::steady_clock::now();
  const Matrix<double> l = logm(t.a, opts, &rep);
  const auto t1 = std::chrono::steady_clock::now();
  BenchRecord r;
  r.matrix_id = t.id;
  r.n = t.a.size();
  r.method = method;
  r.er = relative_error(l, t.log_ref);
  r.products = rep.counter.products;
  r.divisions = rep.counter.divisions;
  r.equivalent_m = rep.counter.equivalent_m();
  r.seconds = std::chrono::duration<double>(t1 - t0).count();
  r.s = rep.s;
  r.k = rep.k_selected;
  r.m = rep.m_selected;
  r.alpha = rep.alpha_used;
  r.theta = rep.theta_selected;
  r.eval_products = rep.eval_products;
  r.square_products = rep.square_products;
  return r;
}

std::vector<BenchRecord> run_bench(const std::vector<TestMatrix>& set, const std::vector<std::string>& methods,
                                   const LogmOptions& base) {
  std::vector<BenchRecord> out;
  for (const TestMatrix& t : set)
    for (const std::string& m : methods) out.push_back(run_one(t, m, base));
  return out;
}

void write_bench_csv(std::ostream& os, const std::vector<BenchRecord>& records) {
  os << kBenchHeader << '\n';
  for (const BenchRecord& r : records) {
    if (r.matrix_id.find(',') != std::string::npos || r.method.find(',') != std::string::npos)
      throw ArgumentError("write_bench_csv: identifiers may not contain commas");
    os << r.matrix_id << ',' << r.n << ',' << r.method << ',' << csv_number(r.er) << ',' << r.products << ','
       << r.divisions << ',' << csv_number(r.equivalent_m) << ',' << csv_number(r.seconds) << ',' << r.s << ','
       << r.k << ',' << r.m << ',' << csv_number(r.alpha) << ',' << csv_number(r.theta) << ',' << r.eval_products
       << ',' << r.square_products << '\n';
  }
}

std::vector<BenchRecord> read_bench_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kBenchHeader) throw ParseError("bench CSV: missing or unexpected header");
  std::vector<BenchRecord> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 15) throw ParseError("bench CSV: expected 15 fields, got " + std::to_string(f.size()));
    BenchRecord r;
    r.matrix_id = f[0];
    r.n = static_cast<std::size_t>(parse_long(f[1]));
    r.method = f[2];
    r.er = parse_double(f[3]);
    r.products = parse_long(f[4]);
    r.divisions = parse_long(f[5]);
    r.equivalent_m = parse_double(f[6]);
    r.seconds = parse_double(f[7]);
    r.s = static_cast<int>(parse_long(f[8]));
    r.k = static_cast<int>(parse_long(f[9]));
    r.m = static_cast<int>(parse_long(f[10]));
    r.alpha = parse_double(f[11]);
    r.theta = parse_double(f[12]);
    r.eval_products = static_cast<int>(parse_long(f[13]));
    r.square_products = static_cast<int>(parse_long(f[14]));
    if (!(r.er >= 0.0)) throw ParseError("bench CSV: negative or NaN error");
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<ProfileCurve> performance_profile(const std::vector<BenchRecord>& records) {
  std::set<std::string> methods;
  std::map<std::string, std::map<std::string, double>> grid;  // matrix -> method -> Er'
  for (const BenchRecord& r : records) {
    methods.insert(r.method);
    grid[r.matrix_id][r.method] = std::max(r.er, kUnitRoundoff);
  }
  for (const auto& [id, row] : grid)
    if (row.size() != methods.size()) throw ArgumentError("performance_profile: matrix " + id + " lacks some method");

  std::vector<ProfileCurve> curves;
  const double count = static_cast<double>(grid.size());
  for (const std::string& m : methods) {
    ProfileCurve c{m, {}};
    for (int i = 0; i <= 40; ++i) {
      const double a = (10 + i) / 10.0;
      int hits = 0;
      for (const auto& [id, row] : grid) {
        double best = INFINITY;
        for (const auto& [mm, e] : row) best = std::min(best, e);
        // The grid values are decimal, so allow a few ulps in the ratio.
        if (row.at(m) <= a * best * (1.0 + 4.0 * kUnitRoundoff)) ++hits;
      }
      c.points.push_back({a, count > 0 ? hits / count : 1.0});
    }
    curves.push_back(std::move(c));
  }
  return curves;
}

void write_profile_csv(std::ostream& os, const std::vector<ProfileCurve>& curves) {
  os << "method,alpha,p\n";
  for (const ProfileCurve& c : curves)
    for (const ProfilePoint& p : c.points) os << c.method << ',' << csv_number(p.alpha) << ',' << csv_number(p.p) << '\n';
}

namespace {

constexpr double kW = 640, kH = 400, kL = 60, kR = 20, kT = 20, kB = 50;
const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

std::string svg_open(const std::string& xlabel, const std::string& ylabel) {
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH << "\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    << "<rect x=\"" << kL << "\" y=\"" << kT << "\" width=\"" << kW - kL - kR << "\" height=\"" << kH - kT - kB
    << "\" fill=\"none\" stroke=\"black\"/>\n"
    << "<text x=\"" << (kW + kL - kR) / 2 << "\" y=\"" << kH - 10 << "\" text-anchor=\"middle\">" << xlabel
    << "</text>\n"
    << "<text x=\"15\" y=\"" << (kH - kB + kT) / 2 << "\" transform=\"rotate(-90 15 " << (kH - kB + kT) / 2
    << ")\" text-anchor=\"middle\">" << ylabel << "</text>\n";
  return s.str();
}

}  // namespace

std::string profile_svg(const std::vector<ProfileCurve>& curves) {
  std::ostringstream s;
  s << svg_open("alpha", "p");
  auto px = [](double a) { return kL + (a - 1.0) / 4.0 * (kW - kL - kR); };
  auto py = [](double p) { return kH - kB - p * (kH - kT - kB); };
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const char* col = kColors[i % 5];
    s << "<polyline fill=\"none\" stroke=\"" << col << "\" points=\"";
    for (const ProfilePoint& p : curves[i].points) s << px(p.alpha) << ',' << py(p.p) << ' ';
    s << "\"/>\n<text x=\"" << kL + 10 << "\" y=\"" << kT + 20 + 18 * static_cast<double>(i) << "\" fill=\"" << col
      << "\">" << curves[i].method << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

std::string error_svg(const std::vector<BenchRecord>& records) {
  std::vector<std::string> ids, methods;
  std::map<std::string, std::size_t> pos;
  double lo = INFINITY, hi = -INFINITY;
  for (const BenchRecord& r : records) {
    if (!pos.count(r.matrix_id)) {
      pos[r.matrix_id] = ids.size();
      ids.push_back(r.matrix_id);
    }
    if (std::find(methods.begin(), methods.end(), r.method) == methods.end()) methods.push_back(r.method);
    const double e = std::log10(std::max(r.er, 1e-20));
    lo = std::min(lo, e);
    hi = std::max(hi, e);
  }
  if (!(hi > lo)) {
    lo -= 1.0;
    hi += 1.0;
  }
  std::ostringstream s;
  s << svg_open("matrix", "log10 Er");
  const double span = std::max<double>(1.0, static_cast<double>(ids.size()) - 1.0);
  for (const BenchRecord& r : records) {
    const std::size_t mi = static_cast<std::size_t>(std::find(methods.begin(), methods.end(), r.method) - methods.begin());
    const double x = kL + static_cast<double>(pos[r.matrix_id]) / span * (kW - kL - kR);
    const double y = kH - kB - (std::log10(std::max(r.er, 1e-20)) - lo) / (hi - lo) * (kH - kT - kB);
    s << "<circle cx=\"" << x << "\" cy=\"" << y << "\" r=\"3\" fill=\"" << kColors[mi % 5] << "\"/>\n";
  }
  for (std::size_t i = 0; i < methods.size(); ++i)
    s << "<text x=\"" << kL + 10 << "\" y=\"" << kT + 20 + 18 * static_cast<double>(i) << "\" fill=\"" << kColors[i % 5]
      << "\">" << methods[i] << "</text>\n";
  s << "</svg>\n";
  return s.str();
}

template double relative_error(const Matrix<double>&, const Matrix<double>&);
template double relative_error(const Matrix<cplx>&, const Matrix<cplx>&);
template double norm2_power(const Matrix<double>&, int, double);
template double norm2_power(const Matrix<cplx>&, int, double);
template double norm2_svd(const Matrix<double>&);
template double norm2_svd(const Matrix<cplx>&);

}  // namespace graphlogm
