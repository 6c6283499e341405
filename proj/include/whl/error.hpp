#pragma once

#include <stdexcept>
#include <string>

namespace whl {

enum class ErrorCode {
  EmptySample,
  LengthMismatch,
  NonPositiveWeight,
  EmptyPairSet,
  EmptySet,
  SampleTooLarge,
  BadParameters,
  InsufficientReplications,
  BadCase,
};

const char* to_string(ErrorCode code) noexcept;

/// Raised for every precondition violation in the library. The code is
/// stable; the message is for humans.
class Error : public std::invalid_argument {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::invalid_argument(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace whl
