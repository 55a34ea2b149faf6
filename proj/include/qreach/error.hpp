#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qreach {

enum class ErrorCode {
  kDimensionMismatch,
  kNotPsd,
  kDivergentCesaro,
  kUnknownName,
  kSchemaViolation,
  kSchedulerViolation,
  kNotInvariant,
  kWitnessExtractionFailed,
  kEmptyWord,
  kNotRank1,
  kHasMeasurements,
  kBudgetExceeded,
  kNotProjective,
  kNotUnitary,
  kInvalidArgument,
  kInternal,
};

std::string_view to_string(ErrorCode code);

// All library failures are reported through this exception; `code()` lets the
// CLI map them onto exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace qreach
