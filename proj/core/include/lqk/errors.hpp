#pragma once

#include <stdexcept>
#include <string>

namespace lqk {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the declared domain (time out of range, shape mismatch).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Input that cannot be parsed into a problem. `where` names the offending
/// key path, e.g. "A.values[2]".
class ParseError : public Error {
 public:
  ParseError(std::string where, const std::string& what)
      : Error(where + ": " + what), where_(std::move(where)) {}
  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

/// Base class of failures that happen while computing, as opposed to bad input.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A matrix required to be positive definite is not.
class SingularityError : public NumericalError {
 public:
  SingularityError(const std::string& what, double min_eigenvalue)
      : NumericalError(what + " (min eigenvalue " + std::to_string(min_eigenvalue) + ")"),
        min_eigenvalue_(min_eigenvalue) {}
  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

/// Integration produced a non-finite value or lost a structural property.
class BlowUpError : public NumericalError {
 public:
  BlowUpError(const std::string& what, double time)
      : NumericalError(what + " at t=" + std::to_string(time)), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

/// The shooting system of the kernel boundary value problem is singular.
class BvpDegeneracyError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// The kernel diagonal cannot reproduce the requested initial state.
class DegenerateProblemError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Interpolation constraints are outside the range of the Gram matrix.
class InfeasibleInterpolationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace lqk
