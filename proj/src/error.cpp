#include "uniformize/error.hpp"

namespace uniformize {

ErrorCategory category_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotConverged:
    case ErrorCode::MonotonicityViolated:
    case ErrorCode::EmptyBarrierWindow:
    case ErrorCode::SandwichViolated:
    case ErrorCode::PeriodMismatch:
    case ErrorCode::NearZeroOnContour:
    case ErrorCode::WindingResidual:
    case ErrorCode::DegeneratePole:
    case ErrorCode::SingularSystem:
      return ErrorCategory::Numerical;
    default:
      return ErrorCategory::Contract;
  }
}

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid_argument";
    case ErrorCode::Parse: return "parse";
    case ErrorCode::Io: return "io";
    case ErrorCode::BasepointOutside: return "basepoint_outside";
    case ErrorCode::BoxTooSmall: return "box_too_small";
    case ErrorCode::DegenerateLevel: return "degenerate_level";
    case ErrorCode::FeatureTooSmall: return "feature_too_small";
    case ErrorCode::DiskNotContained: return "disk_not_contained";
    case ErrorCode::ClearanceViolation: return "clearance_violation";
    case ErrorCode::SizeExceeded: return "size_exceeded";
    case ErrorCode::NestingViolation: return "nesting_violation";
    case ErrorCode::NotConverged: return "not_converged";
    case ErrorCode::MonotonicityViolated: return "monotonicity_violated";
    case ErrorCode::EmptyBarrierWindow: return "empty_barrier_window";
    case ErrorCode::SandwichViolated: return "sandwich_violated";
    case ErrorCode::PeriodMismatch: return "period_mismatch";
    case ErrorCode::NearZeroOnContour: return "near_zero_on_contour";
    case ErrorCode::WindingResidual: return "winding_residual";
    case ErrorCode::DegeneratePole: return "degenerate_pole";
    case ErrorCode::SingularSystem: return "singular_system";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace uniformize
