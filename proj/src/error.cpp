#include "qreach/error.hpp"

namespace qreach {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kNotPsd: return "NotPSD";
    case ErrorCode::kDivergentCesaro: return "DivergentCesaro";
    case ErrorCode::kUnknownName: return "UnknownName";
    case ErrorCode::kSchemaViolation: return "SchemaViolation";
    case ErrorCode::kSchedulerViolation: return "SchedulerViolation";
    case ErrorCode::kNotInvariant: return "NotInvariant";
    case ErrorCode::kWitnessExtractionFailed: return "WitnessExtractionFailed";
    case ErrorCode::kEmptyWord: return "EmptyWord";
    case ErrorCode::kNotRank1: return "NotRank1";
    case ErrorCode::kHasMeasurements: return "HasMeasurements";
    case ErrorCode::kBudgetExceeded: return "BudgetExceeded";
    case ErrorCode::kNotProjective: return "NotProjective";
    case ErrorCode::kNotUnitary: return "NotUnitary";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kInternal: return "Internal";
  }
  return "Unknown";
}

}  // namespace qreach
