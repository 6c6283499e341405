#include "whl/error.hpp"

namespace whl {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptySample: return "EmptySample";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::NonPositiveWeight: return "NonPositiveWeight";
    case ErrorCode::EmptyPairSet: return "EmptyPairSet";
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::SampleTooLarge: return "SampleTooLarge";
    case ErrorCode::BadParameters: return "BadParameters";
    case ErrorCode::InsufficientReplications: return "InsufficientReplications";
    case ErrorCode::BadCase: return "BadCase";
  }
  return "Unknown";
}

}  // namespace whl
