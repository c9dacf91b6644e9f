#pragma once

#include <stdexcept>
#include <string>

namespace uniformize {

/// Failure classes. Contract violations map to exit code 2, numerical
/// failures to exit code 3.
enum class ErrorCode {
  InvalidArgument,
  Parse,
  Io,
  BasepointOutside,
  BoxTooSmall,
  DegenerateLevel,
  FeatureTooSmall,
  DiskNotContained,
  ClearanceViolation,
  SizeExceeded,
  NestingViolation,
  NotConverged,
  MonotonicityViolated,
  EmptyBarrierWindow,
  SandwichViolated,
  PeriodMismatch,
  NearZeroOnContour,
  WindingResidual,
  DegeneratePole,
  SingularSystem,
};

enum class ErrorCategory { Contract, Numerical };

ErrorCategory category_of(ErrorCode code);
const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  ErrorCategory category() const noexcept { return category_of(code_); }

 private:
  ErrorCode code_;
};

}  // namespace uniformize
