#pragma once

#include <stdexcept>
#include <string>

namespace ubss {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters or inconsistent configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Operand shapes do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Numerical input that the algorithm cannot use (non-finite values,
/// zero-variance signals, singular pairs).
class NumericError : public Error {
 public:
  using Error::Error;
};

/// File read/write or parse failure; the message carries the path and,
/// when known, the row or line number.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace ubss
