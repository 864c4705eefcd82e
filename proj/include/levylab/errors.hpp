#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace levylab {

// Error taxonomy. Everything deriving from std::invalid_argument or
// std::domain_error is a validation failure (bad input); everything deriving
// from std::runtime_error is a numerical failure on valid input.

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Structural precondition on the inputs violated.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Grids or fields that do not conform to each other.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed or incomplete experiment configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure could not reach the requested accuracy.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what,
                          double achieved = std::numeric_limits<double>::quiet_NaN())
      : std::runtime_error(what), achieved_(achieved) {}

  double achieved_tolerance() const noexcept { return achieved_; }

 private:
  double achieved_;
};

/// An integral grows without bound under refinement.
class DivergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// A property that cannot be decided from the information available.
class UndecidableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace levylab
