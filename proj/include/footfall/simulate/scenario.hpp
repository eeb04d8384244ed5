#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "footfall/ingest/frame.hpp"

namespace footfall::simulate {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

// One person crossing the view in a straight line. Present on frames
// [enter_frame, exit_frame).
struct PersonPath {
  std::int64_t enter_frame = 0;
  std::int64_t exit_frame = 0;
  Point start_center;
  Point end_center;
  double box_w = 0.1;
  double box_h = 0.3;

  // Noise-free box on `frame`, which must lie in [enter_frame, exit_frame).
  ingest::BBox box_at(std::int64_t frame) const;
  bool present_at(std::int64_t frame) const { return frame >= enter_frame && frame < exit_frame; }
};

struct NoiseSpec {
  double jitter_sigma = 0.0;  // per-axis center jitter, normalized units
  double dropout_prob = 0.0;  // per person per frame
  int max_consecutive_dropouts = 0;
};

struct Scenario {
  std::uint64_t seed = 0;
  std::vector<PersonPath> persons;
  double frame_rate = 30.0;
  std::int64_t duration_frames = 1;
  NoiseSpec noise;
  std::string stream_id = "cam0";
  std::int64_t start_ms = 1561971600000;  // 2019-07-01T09:00:00Z
  double confidence = 0.9;

  /// Throws Error(kInvalidScenario) on any violated invariant.
  void validate() const;
  std::int64_t timestamp_ms(std::int64_t frame) const;
};

struct PersonInterval {
  std::int64_t enter_frame = 0;
  std::int64_t exit_frame = 0;

  friend bool operator==(const PersonInterval&, const PersonInterval&) = default;
};

struct GroundTruth {
  std::int64_t person_count = 0;
  std::vector<PersonInterval> intervals;

  friend bool operator==(const GroundTruth&, const GroundTruth&) = default;
};

struct GeneratedStream {
  std::vector<ingest::DetectionFrame> frames;
  GroundTruth truth;
};

/// One frame per index in [0, duration_frames). Each present person emits a
/// box on the linear path, jittered and dropped per the noise spec; frames
/// list detections in person order. Deterministic for a fixed scenario.
GeneratedStream generate(const Scenario& scenario);

struct ScenarioParams {
  std::int64_t duration_frames = 0;  // 0 picks a length proportional to the head count
  double frame_rate = 30.0;
  std::string stream_id = "cam0";
  std::int64_t start_ms = 1561971600000;
  std::int64_t min_path_frames = 30;
  std::int64_t max_path_frames = 90;
  double min_box_w = 0.06;
  double max_box_w = 0.14;
  double min_box_h = 0.18;
  double max_box_h = 0.35;
  double max_speed = 0.008;  // normalized units per frame, per axis
  int max_concurrent = 5;
  double max_cross_iou = 0.2;
  // Cross-person separation is enforced between any two frames this close,
  // covering how long a tracker keeps a box after its last association.
  std::int64_t separation_lag_frames = 16;
  // A path's box must keep at least this IoU with itself across the longest
  // dropout gap, so a last-box tracker re-associates after it.
  double min_self_iou = 0.4;
  NoiseSpec noise;
  int max_attempts = 2000;  // per person
};

/// Places exactly `people` persons so that no two noise-free boxes within
/// separation_lag_frames of each other exceed max_cross_iou, at most
/// max_concurrent persons are present on any frame, and every path keeps
/// min_self_iou across its maximal dropout gap.
/// Throws Error(kUnsatisfiable) when a person cannot be placed within
/// max_attempts draws, Error(kInvalidScenario) for bad parameters.
Scenario random_scenario(std::uint64_t seed, int people, const ScenarioParams& params = {});

std::string serialize_truth(const GroundTruth& truth);
GroundTruth parse_truth(std::string_view text);

/// `<stem>.truth` next to the stream file.
std::filesystem::path truth_path_for(const std::filesystem::path& stream_path);

/// Writes the newline-delimited stream to `stream_path` and the sidecar
/// truth file. Throws Error(kStorageFailure) on I/O failure.
void write_files(const GeneratedStream& generated, const std::filesystem::path& stream_path);

}  // namespace footfall::simulate
