#pragma once

#include <stdexcept>
#include <string>

namespace nucseg {

/// Raised when a caller violates a documented precondition or a config
/// invariant. The message names the offending field.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised for unusable input data: degenerate histograms, malformed files.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when the histogram model cannot be fitted or yields no threshold.
class FitError : public DataError {
 public:
  using DataError::DataError;
};

}  // namespace nucseg
