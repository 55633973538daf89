#pragma once

#include <stdexcept>
#include <string>

namespace bergman {

enum class ErrorKind {
  InvalidArgument,
  NotConvex,
  NotSimple,
  DomainError,
  NoPointwiseHessian,
  DegreeTooLarge,
  NonFiniteIntegrand,
  QuadratureNotConverged,
  BasisDependent,
  ProbeTooCloseToBoundary,
  InsufficientProbes,
  EmptyGrid,
  GridTooSmall,
  OutsideBaseLocus,
  DerivativeVanishes,
};

const char* to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library. `kind()` is stable and meant for
/// programmatic dispatch; `what()` carries the human-readable diagnostic.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised when refinement hits the degree cap. Carries the last relative
/// change between consecutive rules.
class QuadratureNotConverged : public Error {
 public:
  QuadratureNotConverged(double last_delta, int last_degree);

  double last_delta() const noexcept { return last_delta_; }
  int last_degree() const noexcept { return last_degree_; }

 private:
  double last_delta_;
  int last_degree_;
};

}  // namespace bergman
