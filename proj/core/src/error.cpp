#include "bergman/error.hpp"

#include <sstream>

namespace bergman {
namespace {

std::string not_converged_message(double last_delta, int last_degree) {
  std::ostringstream os;
  os << "quadrature not converged: last relative delta " << last_delta << " at degree "
     << last_degree;
  return os.str();
}

}  // namespace

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid argument";
    case ErrorKind::NotConvex: return "not convex";
    case ErrorKind::NotSimple: return "not simple";
    case ErrorKind::DomainError: return "domain error";
    case ErrorKind::NoPointwiseHessian: return "no pointwise Hessian";
    case ErrorKind::DegreeTooLarge: return "degree too large";
    case ErrorKind::NonFiniteIntegrand: return "non-finite integrand";
    case ErrorKind::QuadratureNotConverged: return "quadrature not converged";
    case ErrorKind::BasisDependent: return "basis numerically dependent";
    case ErrorKind::ProbeTooCloseToBoundary: return "probe too close to boundary";
    case ErrorKind::InsufficientProbes: return "insufficient probes";
    case ErrorKind::EmptyGrid: return "empty grid";
    case ErrorKind::GridTooSmall: return "grid too small";
    case ErrorKind::OutsideBaseLocus: return "outside base locus";
    case ErrorKind::DerivativeVanishes: return "derivative vanishes";
  }
  return "unknown";
}

QuadratureNotConverged::QuadratureNotConverged(double last_delta, int last_degree)
    : Error(ErrorKind::QuadratureNotConverged, not_converged_message(last_delta, last_degree)),
      last_delta_(last_delta),
      last_degree_(last_degree) {}

}  // namespace bergman
