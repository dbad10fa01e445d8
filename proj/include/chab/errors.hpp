#pragma once

#include <stdexcept>
#include <string>

namespace chab {

// Error taxonomy for the kernel. Hard failures are exceptions; algorithmic
// verdicts (FAIL, NotDivisible, NotASquare) are values on the relevant APIs.
enum class ErrorCode {
  kPrecisionExhausted,
  kDivisionByApparentZero,
  kApparentZero,
  kIllConditionedGcd,
  kNoGoodShift,
  kInconsistent,
  kPreconditionViolated,
  kDivergenceSuspected,
  kDeduplicationUnsound,
  kStoppingRuleUnmet,
  kNoModel,
  kTooLarge,
  kFixtureMissing,
  kInternalMismatch,
  kBadInput,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::kPrecisionExhausted: return "PrecisionExhausted";
    case ErrorCode::kDivisionByApparentZero: return "DivisionByApparentZero";
    case ErrorCode::kApparentZero: return "ApparentZero";
    case ErrorCode::kIllConditionedGcd: return "IllConditionedGcd";
    case ErrorCode::kNoGoodShift: return "NoGoodShift";
    case ErrorCode::kInconsistent: return "Inconsistent";
    case ErrorCode::kPreconditionViolated: return "PreconditionViolated";
    case ErrorCode::kDivergenceSuspected: return "DivergenceSuspected";
    case ErrorCode::kDeduplicationUnsound: return "DeduplicationUnsound";
    case ErrorCode::kStoppingRuleUnmet: return "StoppingRuleUnmet";
    case ErrorCode::kNoModel: return "NoModel";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kFixtureMissing: return "FixtureMissing";
    case ErrorCode::kInternalMismatch: return "InternalMismatch";
    case ErrorCode::kBadInput: return "BadInput";
  }
  return "Unknown";
}

[[noreturn]] inline void raise(ErrorCode code, const std::string& what) {
  throw Error(code, std::string(error_code_name(code)) + ": " + what);
}

}  // namespace chab
