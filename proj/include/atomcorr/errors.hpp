#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace atomcorr {

// Failure categories raised by the numerical modules. The CLI maps all of
// these to exit code 2; configuration problems use ConfigError instead.
enum class ErrorCode {
  InvalidArgument,
  SingularSystem,
  StepTooLarge,
  ZeroEta,
  ZeroProbe,
  ZeroIntensity,
  ZeroTransmission,
  LambdaHalfDivergence,
  CoincidentPoints,
  QuadratureNotConverged,
  MalformedModeGrid,
};

std::string_view to_string(ErrorCode code);

class SimError : public std::runtime_error {
 public:
  SimError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::ZeroEta: return "ZeroEta";
    case ErrorCode::ZeroProbe: return "ZeroProbe";
    case ErrorCode::ZeroIntensity: return "ZeroIntensity";
    case ErrorCode::ZeroTransmission: return "ZeroTransmission";
    case ErrorCode::LambdaHalfDivergence: return "LambdaHalfDivergence";
    case ErrorCode::CoincidentPoints: return "CoincidentPoints";
    case ErrorCode::QuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorCode::MalformedModeGrid: return "MalformedModeGrid";
  }
  return "Unknown";
}

}  // namespace atomcorr
