#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace footfall {

enum class ErrorCode {
  kMalformedRecord,
  kInvalidField,
  kOutOfOrderFrame,
  kEmptyImage,
  kInvalidScenario,
  kUnsatisfiable,
  kNoTraffic,
  kDateMismatch,
  kSequenceGap,
  kStorageFailure,
  kCorruptEntry,
  kUnknownDate,
  kInvalidCount,
  kBadRange,
  kServiceUnavailable,
  kInvalidConfig,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        detail_(message) {}

  ErrorCode code() const noexcept { return code_; }
  // Message without the error-code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace footfall
