#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace footfall::ingest {

/// Axis-aligned box in normalized frame coordinates, origin top-left.
struct BBox {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double area() const { return width() * height(); }

  /// 0 <= min < max <= 1 on both axes.
  bool is_valid() const {
    return 0.0 <= x_min && x_min < x_max && x_max <= 1.0 &&
           0.0 <= y_min && y_min < y_max && y_max <= 1.0;
  }

  friend bool operator==(const BBox&, const BBox&) = default;
};

struct Detection {
  BBox box;
  double confidence = 0.0;

  friend bool operator==(const Detection&, const Detection&) = default;
};

struct DetectionFrame {
  std::string stream_id;
  std::int64_t frame_index = 0;
  std::int64_t timestamp_ms = 0;
  std::vector<Detection> detections;

  friend bool operator==(const DetectionFrame&, const DetectionFrame&) = default;
};

inline constexpr double kDefaultConfidenceThreshold = 0.5;

/// Keeps detections with confidence >= threshold, preserving order.
DetectionFrame filter_confidence(DetectionFrame frame, double threshold);

}  // namespace footfall::ingest
