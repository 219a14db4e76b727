#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qlvar {

enum class ErrorCode {
  InvalidArgument,
  PointInsideHorizon,
  PoleEvaluation,
  DegenerateMetric,
  NormalOrientationAmbiguous,
  SolvabilityLost,
  HorizonCrossing,
  PoleRegularityFailure,
  EmbeddingToleranceNotMet,
  NonTangentialResidual,
  NonNormalMotion,
  StepTooLarge,
  PreconditionHNotMatched,
  PreconditionShiftNotZero,
  PreconditionScalarCurvatureMismatch,
  EtaVanishes,
  IsometryViolation,
  SchemaError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so the
/// CLI can map it to a report entry without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

}  // namespace qlvar
