#include "graphlogm/matio.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace graphlogm {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_scalar(const cplx& v) {
  std::string s = format_double(v.real());
  const double im = v.imag();
  if (im >= 0.0 || std::isnan(im)) s += '+';
  s += format_double(im);
  s += 'i';
  return s;
}

double parse_double(const std::string& token) {
  double v = 0.0;
  const char* first = token.data();
  const char* last = first + token.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) throw ParseError("cannot parse number '" + token + "'");
  return v;
}

cplx parse_scalar(const std::string& token) {
  if (token.empty()) throw ParseError("empty scalar token");
  if (token.back() != 'i') return {parse_double(token), 0.0};
  // Split at the last sign that does not belong to an exponent.
  const std::string body = token.substr(0, token.size() - 1);
  for (std::size_t p = body.size(); p-- > 1;) {
    if ((body[p] == '+' || body[p] == '-') && body[p - 1] != 'e' && body[p - 1] != 'E')
      return {parse_double(body.substr(0, p)), parse_double(body.substr(p))};
  }
  return {0.0, parse_double(body)};
}

AnyMatrix read_matrix(std::istream& in) {
  long long n = 0;
  if (!(in >> n)) throw ParseError("matrix file: missing dimension line");
  if (n < 1) throw ParseError("matrix file: dimension must be positive");
  const auto nn = static_cast<std::size_t>(n);
  std::vector<cplx> vals;
  vals.reserve(nn * nn);
  bool complex = false;
  std::string tok;
  while (vals.size() < nn * nn && in >> tok) {
    const cplx v = parse_scalar(tok);
    if (tok.back() == 'i') complex = true;
    vals.push_back(v);
  }
  if (vals.size() != nn * nn) throw ParseError("matrix file: expected n*n entries");
  if (in >> tok) throw ParseError("matrix file: trailing data after n*n entries");
  if (complex) return Matrix<cplx>(nn, std::move(vals));
  std::vector<double> re(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) re[i] = vals[i].real();
  return Matrix<double>(nn, std::move(re));
}

AnyMatrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return read_matrix(in);
}

template <Scalar T>
void write_matrix(std::ostream& out, const Matrix<T>& a) {
  out << a.size() << '\n';
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (j) out << ' ';
      if constexpr (is_complex_v<T>)
        out << format_scalar(a(i, j));
      else
        out << format_double(a(i, j));
    }
    out << '\n';
  }
}

template <Scalar T>
void write_matrix_file(const std::string& path, const Matrix<T>& a) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  write_matrix(out, a);
}

template void write_matrix(std::ostream&, const Matrix<double>&);
template void write_matrix(std::ostream&, const Matrix<cplx>&);
template void write_matrix_file(const std::string&, const Matrix<double>&);
template void write_matrix_file(const std::string&, const Matrix<cplx>&);

}  // namespace graphlogm
