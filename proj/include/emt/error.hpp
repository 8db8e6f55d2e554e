#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace emt {

enum class ErrorCode {
  NonPositiveConductivity,
  NonFinite,
  RadiusOutOfRange,
  RadiusOrdering,
  FractionOutOfRange,
  ExponentOutOfRange,
  AngleOutOfRange,
  DegenerateDenominator,
  EqualConductivities,
  SingularTensor,
  SolverSingular,
  EmptyLayerList,
  StiffnessFailure,
  NonRealAdmittance,
  LinearSolveFailure,
  GridTooCoarse,
  MethodGeometryMismatch,
  InvalidParameterPath,
  RangeViolatesInvariant,
  Parse,
  Usage,
};

std::string_view to_string(ErrorCode code);

/// Base exception for every library failure; carries a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

struct Violation {
  ErrorCode code;
  std::string field;
  std::string message;
};

/// Thrown by validate(); holds every violated invariant, not just the first.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Violation> violations);

  const std::vector<Violation>& violations() const noexcept { return violations_; }

 private:
  std::vector<Violation> violations_;
};

}  // namespace emt
