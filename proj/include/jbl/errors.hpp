#pragma once

#include <stdexcept>
#include <string>

namespace jbl {

// Bad inputs / violated preconditions. CLI maps these to exit code 2.
class ValidationError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Numerical-tolerance failures (degeneracies, overflow of a finite window,
// quadrature that cannot resolve the request). CLI maps these to exit code 3.
class NumericError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Eigenvalue collision on a fiber away from the two real symmetry points.
class FiberDegeneracyError : public NumericError {
public:
  using NumericError::NumericError;
};

// Evolved state leaked past the truncation window; caller needs a larger N.
class WindowOverflowError : public NumericError {
public:
  using NumericError::NumericError;
};

// Requested site window cannot be represented on the given phase grid.
class ResolutionError : public NumericError {
public:
  using NumericError::NumericError;
};

} // namespace jbl
