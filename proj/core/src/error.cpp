#include "qlvar/error.hpp"

namespace qlvar {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::PointInsideHorizon: return "PointInsideHorizon";
    case ErrorCode::PoleEvaluation: return "PoleEvaluation";
    case ErrorCode::DegenerateMetric: return "DegenerateMetric";
    case ErrorCode::NormalOrientationAmbiguous: return "NormalOrientationAmbiguous";
    case ErrorCode::SolvabilityLost: return "SolvabilityLost";
    case ErrorCode::HorizonCrossing: return "HorizonCrossing";
    case ErrorCode::PoleRegularityFailure: return "PoleRegularityFailure";
    case ErrorCode::EmbeddingToleranceNotMet: return "EmbeddingToleranceNotMet";
    case ErrorCode::NonTangentialResidual: return "NonTangentialResidual";
    case ErrorCode::NonNormalMotion: return "NonNormalMotion";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::PreconditionHNotMatched: return "PreconditionHNotMatched";
    case ErrorCode::PreconditionShiftNotZero: return "PreconditionShiftNotZero";
    case ErrorCode::PreconditionScalarCurvatureMismatch:
      return "PreconditionScalarCurvatureMismatch";
    case ErrorCode::EtaVanishes: return "EtaVanishes";
    case ErrorCode::IsometryViolation: return "IsometryViolation";
    case ErrorCode::SchemaError: return "SchemaError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace qlvar
