#pragma once

#include <stdexcept>
#include <string>

namespace sparsecurve {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A configuration that cannot be realized (unsupported degree, too few
/// coefficients for the filter length, degenerate constraint row).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent caller input.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// The numerical method could not produce a result.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace sparsecurve
