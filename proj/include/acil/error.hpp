#pragma once

#include <stdexcept>
#include <string>

namespace acil {

/// Malformed input, violated precondition, or bad configuration.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A factorization or solve could not be completed.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Recursive and joint solutions disagree beyond tolerance.
class VerificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Persisted state could not be decoded (bad magic, version, checksum).
class FormatError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

}  // namespace acil
