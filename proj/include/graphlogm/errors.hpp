#pragma once

#include <stdexcept>
#include <string>

namespace graphlogm {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed caller input: bad arguments, mismatched dimensions, parse failures.
class InputError : public Error {
 public:
  using Error::Error;
};

class ArgumentError : public InputError {
 public:
  using InputError::InputError;
};

class DimensionError : public InputError {
 public:
  using InputError::InputError;
};

class ParseError : public InputError {
 public:
  using InputError::InputError;
};

/// Numerical failures: singular operands, spectra outside the domain, stalled iterations.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class SingularMatrixError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DomainError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ConvergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NormalizationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class TruncationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class InfeasibleError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace graphlogm
