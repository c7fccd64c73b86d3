#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace invstab {

enum class ErrorCode {
  kSpecMismatch,
  kInvalidArgument,
  kConvergenceFailure,
  kDegenerateDirection,
  kKindSpecMismatch,
  kNotContractive,
  kExhausted,
  kNoContraction,
  kOutOfRange,
  kOverflow,
  kNonCauchy,
  kConfigError,
};

std::string_view ToString(ErrorCode code);

// All library failures are reported through this exception; the code lets
// callers (notably the CLI) map failures onto exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(ToString(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  // Overflow, NonCauchy and power-iteration breakdown all mean the scaling
  // limit could not be formed.
  bool IsStabilizationFailure() const noexcept {
    return code_ == ErrorCode::kOverflow || code_ == ErrorCode::kNonCauchy ||
           code_ == ErrorCode::kConvergenceFailure;
  }

 private:
  ErrorCode code_;
};

}  // namespace invstab
