#include "graphlogm/scheme.hpp"

#include <fstream>
#include <sstream>

#include "graphlogm/matio.hpp"

namespace graphlogm {

void GraphScheme::validate() const {
  if (k < 1) throw ArgumentError("scheme: k must be >= 1");
  if (h.size() != static_cast<std::size_t>(k) || g.size() != static_cast<std::size_t>(k))
    throw ArgumentError("scheme: H and G need k rows");
  for (int j = 0; j < k; ++j) {
    const auto len = static_cast<std::size_t>(j + 2);
    if (h[j].size() != len || g[j].size() != len)
      throw ArgumentError("scheme: row " + std::to_string(j + 1) + " must have " + std::to_string(len) + " entries");
  }
  if (y.size() != static_cast<std::size_t>(k + 2)) throw ArgumentError("scheme: y needs k+2 entries");
  auto finite = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
  };
  for (int j = 0; j < k; ++j)
    if (!finite(h[j]) || !finite(g[j])) throw ArgumentError("scheme: non-finite coefficient");
  if (!finite(y)) throw ArgumentError("scheme: non-finite coefficient");
}

bool GraphScheme::first_row_normalized() const {
  return k >= 1 && h[0][0] == 0.0 && h[0][1] == 1.0 && g[0][0] == 0.0 && g[0][1] == 1.0;
}

bool GraphScheme::identity_free() const {
  for (int j = 0; j < k; ++j)
    if (h[j][0] != 0.0 || g[j][0] != 0.0) return false;
  return true;
}

std::size_t GraphScheme::coefficient_count() const {
  std::size_t c = y.size();
  for (int j = 0; j < k; ++j) c += h[j].size() + g[j].size();
  return c;
}

namespace {

// sum_i c[i] P_{i+1}, where P_1 = I is folded in as a diagonal shift.
template <Scalar T>
Matrix<T> combine(const std::vector<double>& c, const std::vector<Matrix<T>>& p, std::size_t n) {
  Matrix<T> out(n);
  for (std::size_t i = 1; i < c.size(); ++i)
    if (c[i] != 0.0) out.axpy(T(c[i]), p[i - 1]);
  if (c[0] != 0.0) out.shift_diagonal(T(c[0]));
  return out;
}

}  // namespace

template <Scalar T>
Matrix<T> eval_degopt(const GraphScheme& s, const Matrix<T>& x, OpCounter& counter, const Matrix<T>* square) {
  s.validate();
  const std::size_t n = x.size();
  if (square && square->size() != n) throw DimensionError("eval_degopt: square has wrong size");
  // p[i] holds P_{i+2}.
  std::vector<Matrix<T>> p;
  p.reserve(static_cast<std::size_t>(s.k) + 1);
  p.push_back(x);
  for (int j = 0; j < s.k; ++j) {
    if (j == 0 && square) {
      const double a0 = s.h[0][0], a1 = s.h[0][1], b0 = s.g[0][0], b1 = s.g[0][1];
      Matrix<T> v = T(a1 * b1) * *square;
      v.axpy(T(a0 * b1 + a1 * b0), x);
      v.shift_diagonal(T(a0 * b0));
      p.push_back(std::move(v));
      continue;
    }
    p.push_back(mat_mul(combine(s.h[j], p, n), combine(s.g[j], p, n), counter));
  }
  return combine(s.y, p, n);
}

template Matrix<double> eval_degopt(const GraphScheme&, const Matrix<double>&, OpCounter&, const Matrix<double>*);
template Matrix<cplx> eval_degopt(const GraphScheme&, const Matrix<cplx>&, OpCounter&, const Matrix<cplx>*);

GraphScheme normalize_scheme(const GraphScheme& s) {
  s.validate();
  const double a0 = s.h[0][0], a1 = s.h[0][1], b0 = s.g[0][0], b1 = s.g[0][1];
  if (a1 * b1 == 0.0) throw NormalizationError("normalize_scheme: first product is degree deficient");
  if (s.first_row_normalized()) return s;
  // Old P_3 = a1 b1 X^2 + (a0 b1 + a1 b0) X + a0 b0 I; rewrite every use of it
  // in terms of the new P_3 = X^2.
  const double c2 = a1 * b1, c1 = a0 * b1 + a1 * b0, c0 = a0 * b0;
  auto fix = [&](std::vector<double>& row) {
    const double w = row[2];
    row[2] = w * c2;
    row[1] += w * c1;
    row[0] += w * c0;
  };
  GraphScheme out = s;
  out.h[0] = {0.0, 1.0};
  out.g[0] = {0.0, 1.0};
  for (int j = 1; j < s.k; ++j) {
    fix(out.h[j]);
    fix(out.g[j]);
  }
  fix(out.y);
  return out;
}

std::string save_scheme(const GraphScheme& s) {
  s.validate();
  std::ostringstream o;
  std::istringstream prov(s.meta.provenance);
  for (std::string line; std::getline(prov, line);) o << "# " << line << '\n';
  o << "k " << s.k << '\n';
  o << "m_order " << s.meta.m_order << (s.meta.order_plus ? "+" : "") << '\n';
  o << "degree " << s.meta.degree << '\n';
  o << "radius " << format_double(s.meta.radius) << '\n';
  o << "theta " << format_double(s.meta.theta) << '\n';
  o << "target " << s.meta.target << '\n';
  auto row = [&](const std::vector<double>& r) {
    for (std::size_t i = 0; i < r.size(); ++i) o << (i ? " " : "") << format_double(r[i]);
    o << '\n';
  };
  o << "H\n";
  for (const auto& r : s.h) row(r);
  o << "G\n";
  for (const auto& r : s.g) row(r);
  o << "y\n";
  row(s.y);
  return o.str();
}

namespace {

std::vector<double> parse_row(const std::string& line) {
  std::istringstream in(line);
  std::vector<double> r;
  for (std::string tok; in >> tok;) r.push_back(parse_double(tok));
  return r;
}

int parse_int(const std::string& v, const std::string& field) {
  try {
    std::size_t used = 0;
    const int x = std::stoi(v, &used);
    if (used != v.size()) throw ParseError("");
    return x;
  } catch (const std::exception&) {
    throw ParseError("scheme: malformed field '" + field + "'");
  }
}

}  // namespace

GraphScheme load_scheme(const std::string& text) {
  GraphScheme s;
  std::istringstream in(text);
  std::vector<std::string> lines;
  std::string prov;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.rfind("#", 0) == 0) {
      const std::size_t start = line.size() > 1 && line[1] == ' ' ? 2 : 1;
      prov += line.substr(start) + '\n';
      continue;
    }
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    lines.push_back(line);
  }
  if (!prov.empty()) prov.pop_back();
  s.meta.provenance = prov;

  bool have_k = false;
  std::size_t i = 0;
  auto take_rows = [&](std::vector<std::vector<double>>& rows, const char* name) {
    if (!have_k) throw ParseError(std::string("scheme: ") + name + " before k");
    for (int j = 0; j < s.k; ++j, ++i) {
      if (i >= lines.size()) throw ParseError(std::string("scheme: missing rows in ") + name);
      rows.push_back(parse_row(lines[i]));
      if (rows.back().size() != static_cast<std::size_t>(j + 2))
        throw ParseError(std::string("scheme: row length mismatch in ") + name);
    }
  };
  bool have_h = false, have_g = false, have_y = false;
  while (i < lines.size()) {
    std::istringstream ls(lines[i++]);
    std::string key, value;
    ls >> key;
    std::getline(ls >> std::ws, value);
    if (key == "k") {
      s.k = parse_int(value, key);
      if (s.k < 1 || s.k > 16) throw ParseError("scheme: k out of range");
      have_k = true;
    } else if (key == "m_order") {
      s.meta.order_plus = !value.empty() && value.back() == '+';
      s.meta.m_order = parse_int(s.meta.order_plus ? value.substr(0, value.size() - 1) : value, key);
    } else if (key == "degree") {
      s.meta.degree = parse_int(value, key);
    } else if (key == "radius") {
      s.meta.radius = parse_double(value);
    } else if (key == "theta") {
      s.meta.theta = parse_double(value);
    } else if (key == "target") {
      s.meta.target = value;
    } else if (key == "H") {
      take_rows(s.h, "H");
      have_h = true;
    } else if (key == "G") {
      take_rows(s.g, "G");
      have_g = true;
    } else if (key == "y") {
      if (!have_k) throw ParseError("scheme: y before k");
      if (i >= lines.size()) throw ParseError("scheme: missing y row");
      s.y = parse_row(lines[i++]);
      if (s.y.size() != static_cast<std::size_t>(s.k + 2)) throw ParseError("scheme: y row length mismatch");
      have_y = true;
    } else {
      throw ParseError("scheme: unknown field '" + key + "'");
    }
  }
  if (!have_k) throw ParseError("scheme: missing k");
  if (!have_h || !have_g) throw ParseError("scheme: missing H or G block");
  if (!have_y) throw ParseError("scheme: missing y row");
  if (s.meta.degree == 0) s.meta.degree = 1 << s.k;
  s.validate();
  return s;
}

GraphScheme load_scheme_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_scheme(ss.str());
}

void save_scheme_file(const std::string& path, const GraphScheme& s) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << save_scheme(s);
}

const TaylorScheme& taylor_scheme(int k) {
  if (k < 1 || k > 4) throw ArgumentError("taylor_scheme: k must be in 1..4");
  static const std::vector<TaylorScheme> schemes = [] {
    std::vector<TaylorScheme> v;
    for (int j = 1; j <= 4; ++j) v.push_back({j, builtin_scheme(j)});
    return v;
  }();
  return schemes[static_cast<std::size_t>(k - 1)];
}

template <Scalar T>
Matrix<T> eval_taylor_low(int k, const Matrix<T>& x, OpCounter& counter, const Matrix<T>* square) {
  return eval_degopt(taylor_scheme(k).graph, x, counter, square);
}

template Matrix<double> eval_taylor_low(int, const Matrix<double>&, OpCounter&, const Matrix<double>*);
template Matrix<cplx> eval_taylor_low(int, const Matrix<cplx>&, OpCounter&, const Matrix<cplx>*);

std::vector<double> log_taylor_coefficients(int m) {
  std::vector<double> c(static_cast<std::size_t>(m) + 1, 0.0);
  for (int i = 1; i <= m; ++i) c[static_cast<std::size_t>(i)] = 1.0 / i;
  return c;
}

int ps_products(int m, int tau) {
  if (m < 1 || tau < 1 || tau > m) throw ArgumentError("ps_products: need 1 <= tau <= m");
  return tau - 1 + m / tau - (m % tau == 0 ? 1 : 0);
}

int ps_best_tau(int m) {
  if (m < 1) return 1;
  int best = 1;
  for (int tau = 2; tau <= m; ++tau)
    if (ps_products(m, tau) < ps_products(m, best)) best = tau;
  return best;
}

template <Scalar T>
Matrix<T> paterson_stockmeyer(const std::vector<double>& c, const Matrix<T>& x, OpCounter& counter,
                              const Matrix<T>* square) {
  if (c.empty()) throw ArgumentError("paterson_stockmeyer: empty coefficient list");
  const std::size_t n = x.size();
  const int m = static_cast<int>(c.size()) - 1;
  if (m == 0) return T(c[0]) * Matrix<T>::identity(n);
  const int tau = ps_best_tau(m);
  // pw[i] = X^{i+1}, i < tau.
  std::vector<Matrix<T>> pw{x};
  for (int i = 1; i < tau; ++i)
    pw.push_back(i == 1 && square ? *square : mat_mul(pw.back(), x, counter));
  auto chunk = [&](int j) {
    Matrix<T> b(n);
    const int base = j * tau;
    for (int i = 1; i < tau && base + i <= m; ++i) b.axpy(T(c[static_cast<std::size_t>(base + i)]), pw[static_cast<std::size_t>(i - 1)]);
    b.shift_diagonal(T(c[static_cast<std::size_t>(base)]));
    return b;
  };
  const Matrix<T>& top = pw[static_cast<std::size_t>(tau - 1)];
  const int r = m / tau;
  Matrix<T> acc;
  int j = r;
  if (m % tau == 0) {
    // Top chunk is c_m I: fold it into a scaled power.
    acc = T(c[static_cast<std::size_t>(m)]) * top;
    acc += chunk(r - 1);
    j = r - 1;
  } else {
    acc = chunk(r);
  }
  for (; j > 0; --j) {
    acc = mat_mul(acc, top, counter);
    acc += chunk(j - 1);
  }
  return acc;
}

template Matrix<double> paterson_stockmeyer(const std::vector<double>&, const Matrix<double>&, OpCounter&,
                                            const Matrix<double>*);
template Matrix<cplx> paterson_stockmeyer(const std::vector<double>&, const Matrix<cplx>&, OpCounter&,
                                          const Matrix<cplx>*);

}  // namespace graphlogm
