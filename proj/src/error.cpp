#include "footfall/error.hpp"

namespace footfall {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedRecord: return "MalformedRecord";
    case ErrorCode::kInvalidField: return "InvalidField";
    case ErrorCode::kOutOfOrderFrame: return "OutOfOrderFrame";
    case ErrorCode::kEmptyImage: return "EmptyImage";
    case ErrorCode::kInvalidScenario: return "InvalidScenario";
    case ErrorCode::kUnsatisfiable: return "Unsatisfiable";
    case ErrorCode::kNoTraffic: return "NoTraffic";
    case ErrorCode::kDateMismatch: return "DateMismatch";
    case ErrorCode::kSequenceGap: return "SequenceGap";
    case ErrorCode::kStorageFailure: return "StorageFailure";
    case ErrorCode::kCorruptEntry: return "CorruptEntry";
    case ErrorCode::kUnknownDate: return "UnknownDate";
    case ErrorCode::kInvalidCount: return "InvalidCount";
    case ErrorCode::kBadRange: return "BadRange";
    case ErrorCode::kServiceUnavailable: return "ServiceUnavailable";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

}  // namespace footfall
