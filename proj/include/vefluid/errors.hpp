#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace vefluid {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input outside the mathematical domain of an operation (non-SPD tensor, B <= 0, bad parameters).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A kinematic constraint (traceless rates) is violated beyond tolerance.
class ConstraintError : public Error {
 public:
  using Error::Error;
};

/// A linear system that should be regular turned out singular.
class DegeneracyError : public Error {
 public:
  using Error::Error;
};

class IntegrationError : public Error {
 public:
  using Error::Error;
};

/// Step size fell below h_min (the problem is stiff for an explicit method).
class StepUnderflowError : public IntegrationError {
 public:
  using IntegrationError::IntegrationError;
};

/// More than max_steps steps were needed.
class StepBudgetError : public IntegrationError {
 public:
  using IntegrationError::IntegrationError;
};

/// Right-hand side produced NaN or Inf.
class NonFiniteError : public IntegrationError {
 public:
  NonFiniteError(const std::string& what, double t, std::vector<double> y)
      : IntegrationError(what), t_(t), y_(std::move(y)) {}
  double t() const noexcept { return t_; }
  const std::vector<double>& y() const noexcept { return y_; }

 private:
  double t_;
  std::vector<double> y_;
};

/// A modelling assumption of a reduced model (small strain) no longer holds.
class ScopeError : public Error {
 public:
  using Error::Error;
};

/// Query outside the span of sampled data.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Too many oracle samples could not be projected onto the feasible set.
class OracleInconclusiveError : public Error {
 public:
  using Error::Error;
};

/// Malformed scenario, flags, or input files.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace vefluid
