#pragma once

#include <stdexcept>
#include <string>

namespace setidet {

// Input violates a documented precondition (bad sizes, nonfinite values...).
class InvalidArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The input is structurally valid but the statistic is undefined on it
// (all-zero series, zero-trace matrix).
class DegenerateInputError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Too few Monte Carlo trials (or pooled cells) to pin the requested quantile.
class InsufficientTrialsError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// File I/O and format problems.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Payload shorter/longer than its header claims.
class TruncatedPayloadError : public IoError {
 public:
  using IoError::IoError;
};

}  // namespace setidet
