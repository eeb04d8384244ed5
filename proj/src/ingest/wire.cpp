#include "footfall/ingest/wire.hpp"

#include <nlohmann/json.hpp>

#include "footfall/error.hpp"

namespace footfall::ingest {
namespace {

using nlohmann::json;

[[noreturn]] void malformed(const std::string& what) {
  throw Error(ErrorCode::kMalformedRecord, what);
}

[[noreturn]] void invalid(const std::string& what) {
  throw Error(ErrorCode::kInvalidField, what);
}

const json& require(const json& object, const char* key) {
  auto it = object.find(key);
  if (it == object.end()) malformed(std::string("missing field '") + key + "'");
  return *it;
}

void reject_unknown(const json& object, std::initializer_list<std::string_view> known,
                    std::string_view where) {
  for (auto it = object.begin(); it != object.end(); ++it) {
    if (std::find(known.begin(), known.end(), it.key()) == known.end()) {
      malformed("unknown field '" + it.key() + "' in " + std::string(where));
    }
  }
}

std::int64_t require_integer(const json& object, const char* key) {
  const json& value = require(object, key);
  if (!value.is_number_integer()) malformed(std::string("field '") + key + "' must be an integer");
  if (value.is_number_unsigned()) {
    auto u = value.get<std::uint64_t>();
    if (u > static_cast<std::uint64_t>(INT64_MAX)) invalid(std::string("field '") + key + "' out of range");
    return static_cast<std::int64_t>(u);
  }
  return value.get<std::int64_t>();
}

Detection parse_detection(const json& item, ParseMode mode) {
  if (!item.is_object()) malformed("detection must be an object");
  if (mode == ParseMode::kStrict) reject_unknown(item, {"box", "confidence"}, "detection");

  const json& box = require(item, "box");
  if (!box.is_array() || box.size() != 4) malformed("box must be an array of 4 numbers");
  for (const auto& v : box) {
    if (!v.is_number()) malformed("box must be an array of 4 numbers");
  }
  const json& conf = require(item, "confidence");
  if (!conf.is_number()) malformed("confidence must be a number");

  Detection d;
  d.box = {box[0].get<double>(), box[1].get<double>(), box[2].get<double>(), box[3].get<double>()};
  d.confidence = conf.get<double>();
  if (!(d.confidence >= 0.0 && d.confidence <= 1.0)) invalid("confidence outside [0,1]");
  if (!d.box.is_valid()) invalid("box must satisfy 0 <= min < max <= 1 on both axes");
  return d;
}

}  // namespace

DetectionFrame parse_frame(std::string_view line, ParseMode mode) {
  json doc = json::parse(line.begin(), line.end(), nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) malformed("not a valid record");
  if (!doc.is_object()) malformed("record must be an object");
  if (mode == ParseMode::kStrict) {
    reject_unknown(doc, {"stream_id", "frame_index", "timestamp_ms", "detections"}, "frame");
  }

  DetectionFrame frame;
  const json& stream = require(doc, "stream_id");
  if (!stream.is_string()) malformed("stream_id must be a string");
  frame.stream_id = stream.get<std::string>();
  if (frame.stream_id.empty()) invalid("stream_id must not be empty");

  frame.frame_index = require_integer(doc, "frame_index");
  if (frame.frame_index < 0) invalid("frame_index must be non-negative");
  frame.timestamp_ms = require_integer(doc, "timestamp_ms");
  if (frame.timestamp_ms < 0) invalid("timestamp_ms must be non-negative");

  const json& detections = require(doc, "detections");
  if (!detections.is_array()) malformed("detections must be an array");
  frame.detections.reserve(detections.size());
  for (const auto& item : detections) frame.detections.push_back(parse_detection(item, mode));
  return frame;
}

std::string serialize_frame(const DetectionFrame& frame) {
  nlohmann::ordered_json doc;
  doc["stream_id"] = frame.stream_id;
  doc["frame_index"] = frame.frame_index;
  doc["timestamp_ms"] = frame.timestamp_ms;
  auto& detections = doc["detections"] = nlohmann::ordered_json::array();
  for (const auto& d : frame.detections) {
    nlohmann::ordered_json item;
    item["box"] = {d.box.x_min, d.box.y_min, d.box.x_max, d.box.y_max};
    item["confidence"] = d.confidence;
    detections.push_back(std::move(item));
  }
  return doc.dump();
}

void StreamValidator::check(const DetectionFrame& frame) {
  auto [it, inserted] = last_.try_emplace(frame.stream_id, Position{frame.frame_index, frame.timestamp_ms});
  if (inserted) return;
  if (frame.frame_index <= it->second.frame_index) {
    throw Error(ErrorCode::kOutOfOrderFrame,
                "stream '" + frame.stream_id + "' frame_index " + std::to_string(frame.frame_index) +
                    " not after " + std::to_string(it->second.frame_index));
  }
  if (frame.timestamp_ms < it->second.timestamp_ms) {
    throw Error(ErrorCode::kOutOfOrderFrame,
                "stream '" + frame.stream_id + "' timestamp_ms decreased at frame " +
                    std::to_string(frame.frame_index));
  }
  it->second = {frame.frame_index, frame.timestamp_ms};
}

std::optional<DetectionFrame> FrameReader::next() {
  while (std::getline(in_, buffer_)) {
    ++line_number_;
    if (!buffer_.empty() && buffer_.back() == '\r') buffer_.pop_back();
    if (buffer_.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      DetectionFrame frame = parse_frame(buffer_, mode_);
      validator_.check(frame);
      return frame;
    } catch (const Error& e) {
      throw Error(e.code(), "line " + std::to_string(line_number_) + ": " + e.detail());
    }
  }
  return std::nullopt;
}

}  // namespace footfall::ingest
