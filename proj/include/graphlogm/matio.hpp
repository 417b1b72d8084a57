#pragma once

#include <iosfwd>
#include <string>
#include <variant>

#include "graphlogm/matrix.hpp"

namespace graphlogm {

/// A matrix read from text: real unless some token carries an imaginary part.
using AnyMatrix = std::variant<Matrix<double>, Matrix<cplx>>;

/// Text format: first line n, then n rows of n whitespace-separated scalars.
/// Complex entries are written "re+imi" or "re-imi".
AnyMatrix read_matrix(std::istream& in);
AnyMatrix read_matrix_file(const std::string& path);

template <Scalar T>
void write_matrix(std::ostream& out, const Matrix<T>& a);
template <Scalar T>
void write_matrix_file(const std::string& path, const Matrix<T>& a);

/// 17 significant digits, shortest exact form not attempted.
std::string format_double(double v);
std::string format_scalar(const cplx& v);
double parse_double(const std::string& token);
cplx parse_scalar(const std::string& token);

}  // namespace graphlogm
