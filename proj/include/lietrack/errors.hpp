#pragma once

#include <stdexcept>
#include <string>

namespace lietrack {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Vector length, matrix size or group signature does not match.
class DimensionMismatch : public Error {
public:
  using Error::Error;
};

/// A 3x3 matrix handed to vee() is not an element of se(2).
class MalformedAlgebraElement : public Error {
public:
  using Error::Error;
};

/// Covariance fails the symmetric positive semi-definite check.
class NonPsdCovariance : public Error {
public:
  using Error::Error;
};

/// Non-finite values or a failed factorization inside a filter step.
class NumericalFailure : public Error {
public:
  using Error::Error;
};

/// Innovation covariance could not be inverted; carries its condition estimate.
class UpdateRejected : public NumericalFailure {
public:
  UpdateRejected(const std::string& what, double condition)
      : NumericalFailure(what + " (condition estimate " + std::to_string(condition) + ")"),
        condition_(condition) {}

  double condition() const noexcept { return condition_; }

private:
  double condition_;
};

/// Invalid user-facing configuration (CLI and config files).
class ValidationError : public Error {
public:
  using Error::Error;
};

}  // namespace lietrack
