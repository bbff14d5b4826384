#include "c2a2/error.h"

namespace c2a2 {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMissingCategory: return "MissingCategory";
    case ErrorCode::kOutOfRange: return "OutOfRange";
    case ErrorCode::kDegenerateSum: return "DegenerateSum";
    case ErrorCode::kOutOfBall: return "OutOfBall";
    case ErrorCode::kNeutralHasNoAUs: return "NeutralHasNoAUs";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kRangeViolation: return "RangeViolation";
    case ErrorCode::kNonFinite: return "NonFinite";
    case ErrorCode::kDivergenceDetected: return "DivergenceDetected";
    case ErrorCode::kTooFewSamples: return "TooFewSamples";
    case ErrorCode::kNumericalFailure: return "NumericalFailure";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kRangeError: return "RangeError";
    case ErrorCode::kDuplicateId: return "DuplicateId";
    case ErrorCode::kEmptyJoin: return "EmptyJoin";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace c2a2
