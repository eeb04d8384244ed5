#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>

#include "footfall/ingest/frame.hpp"

namespace footfall::ingest {

// Unknown fields are rejected in strict mode and ignored in lenient mode.
enum class ParseMode { kStrict, kLenient };

/// Parses one newline-delimited detection record:
///   {"stream_id": "...", "frame_index": N, "timestamp_ms": N,
///    "detections": [{"box": [x_min, y_min, x_max, y_max], "confidence": c}, ...]}
/// Throws Error(kMalformedRecord) for unparseable text or wrong field types, and
/// Error(kInvalidField) for values outside their documented ranges.
DetectionFrame parse_frame(std::string_view line, ParseMode mode = ParseMode::kStrict);

/// Inverse of parse_frame. Field order is fixed and numbers use the shortest
/// round-trip representation, so output is byte-stable.
std::string serialize_frame(const DetectionFrame& frame);

// Enforces strictly increasing frame_index and non-decreasing timestamp_ms per stream.
class StreamValidator {
 public:
  void check(const DetectionFrame& frame);
  void reset() { last_.clear(); }

 private:
  struct Position {
    std::int64_t frame_index;
    std::int64_t timestamp_ms;
  };
  std::unordered_map<std::string, Position> last_;
};

/// Reads frames line by line from a stream. Blank lines are skipped. Errors
/// are rethrown with the 1-based line number prefixed to the message.
class FrameReader {
 public:
  explicit FrameReader(std::istream& in, ParseMode mode = ParseMode::kStrict)
      : in_(in), mode_(mode) {}

  std::optional<DetectionFrame> next();
  std::size_t line_number() const { return line_number_; }

 private:
  std::istream& in_;
  ParseMode mode_;
  StreamValidator validator_;
  std::string buffer_;
  std::size_t line_number_ = 0;
};

}  // namespace footfall::ingest
