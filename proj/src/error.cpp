#include "emt/error.hpp"

namespace emt {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPositiveConductivity: return "NonPositiveConductivity";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::RadiusOutOfRange: return "RadiusOutOfRange";
    case ErrorCode::RadiusOrdering: return "RadiusOrdering";
    case ErrorCode::FractionOutOfRange: return "FractionOutOfRange";
    case ErrorCode::ExponentOutOfRange: return "ExponentOutOfRange";
    case ErrorCode::AngleOutOfRange: return "AngleOutOfRange";
    case ErrorCode::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorCode::EqualConductivities: return "EqualConductivities";
    case ErrorCode::SingularTensor: return "SingularTensor";
    case ErrorCode::SolverSingular: return "SolverSingular";
    case ErrorCode::EmptyLayerList: return "EmptyLayerList";
    case ErrorCode::StiffnessFailure: return "StiffnessFailure";
    case ErrorCode::NonRealAdmittance: return "NonRealAdmittance";
    case ErrorCode::LinearSolveFailure: return "LinearSolveFailure";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::MethodGeometryMismatch: return "MethodGeometryMismatch";
    case ErrorCode::InvalidParameterPath: return "InvalidParameterPath";
    case ErrorCode::RangeViolatesInvariant: return "RangeViolatesInvariant";
    case ErrorCode::Parse: return "parse";
    case ErrorCode::Usage: return "usage";
  }
  return "unknown";
}

namespace {

std::string summarize(const std::vector<Violation>& violations) {
  std::string out = "invalid assemblage:";
  for (const auto& v : violations) {
    out += " ";
    out += to_string(v.code);
    out += "(" + v.field + ")";
  }
  return out;
}

}  // namespace

ValidationError::ValidationError(std::vector<Violation> violations)
    : Error(violations.empty() ? ErrorCode::Parse : violations.front().code,
            summarize(violations)),
      violations_(std::move(violations)) {}

}  // namespace emt
