#pragma once

#include <stdexcept>
#include <string>

namespace firmdyn {

/// Raised when an iterative method fails to reach its tolerance, or when a
/// numerical result is unusable (non-finite values, degenerate prices, ...).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// The linear rational-expectations system has no unique stable solution.
class IndeterminacyError : public NumericalError {
 public:
  IndeterminacyError(const std::string& what, int stable_roots, int required_stable)
      : NumericalError(what), stable_roots_(stable_roots), required_stable_(required_stable) {}

  int stable_roots() const noexcept { return stable_roots_; }
  int required_stable() const noexcept { return required_stable_; }

 private:
  int stable_roots_;
  int required_stable_;
};

/// Malformed or inconsistent configuration (unknown keys, out-of-range values).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace firmdyn
