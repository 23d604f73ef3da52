#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace causal {

enum class ErrorKind {
  NotNull,
  ZeroVector,
  ParallelPlanes,
  AtInfinity,
  SingularEvaluation,
  DerivativeDivergence,
  DegenerateSpan,
  NoConvergence,
  NonSymmetric,
  SingularMatrix,
  NoCommonFactor,
  BilinearityViolation,
  ShapeMismatch,
  IndexOutOfRange,
  DerivativeUnavailable,
  FormViolation,
  NoSolution,
  ConfigError,
};

std::string_view to_string(ErrorKind kind);

/// Every failure in the toolkit is reported through this type; `kind()` is
/// what callers branch on, the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace causal
