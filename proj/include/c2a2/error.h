#ifndef C2A2_ERROR_H_
#define C2A2_ERROR_H_

#include <stdexcept>
#include <string>

namespace c2a2 {

enum class ErrorCode {
  kMissingCategory,
  kOutOfRange,
  kDegenerateSum,
  kOutOfBall,
  kNeutralHasNoAUs,
  kDimensionMismatch,
  kRangeViolation,
  kNonFinite,
  kDivergenceDetected,
  kTooFewSamples,
  kNumericalFailure,
  kParseError,
  kRangeError,
  kDuplicateId,
  kEmptyJoin,
  kInvalidArgument,
  kIoError,
};

const char* ErrorCodeName(ErrorCode code);

// Every failure surfaced by the library carries one of the codes above so
// callers (the CLI in particular) can map it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace c2a2

#endif  // C2A2_ERROR_H_
