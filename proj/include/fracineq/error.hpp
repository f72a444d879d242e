#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fracineq {

/// Error categories surfaced by the library. The CLI maps every kind except
/// the verification outcomes to exit status 2.
enum class ErrorKind {
  non_convergence,
  non_finite_integrand,
  invalid_alpha,
  domain_error,
  invalid_config,
  missing_derivative,
  missing_m,
  gg_requires_positive,
  kind_parameter_mismatch,
  hypothesis_not_certified,
  unknown_function,
  parse_error,
};

inline std::string_view to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::non_convergence: return "NonConvergence";
    case ErrorKind::non_finite_integrand: return "NonFiniteIntegrand";
    case ErrorKind::invalid_alpha: return "InvalidAlpha";
    case ErrorKind::domain_error: return "DomainError";
    case ErrorKind::invalid_config: return "InvalidConfig";
    case ErrorKind::missing_derivative: return "MissingDerivative";
    case ErrorKind::missing_m: return "MissingM";
    case ErrorKind::gg_requires_positive: return "GGRequiresPositive";
    case ErrorKind::kind_parameter_mismatch: return "KindParameterMismatch";
    case ErrorKind::hypothesis_not_certified: return "HypothesisNotCertified";
    case ErrorKind::unknown_function: return "UnknownFunction";
    case ErrorKind::parse_error: return "ParseError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, ErrorKind kind, const char* what) {
  if (!cond) fail(kind, what);
}

}  // namespace fracineq
