#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "footfall/ingest/frame.hpp"
#include "footfall/simd/dispatch.hpp"
#include "footfall/tracker/association.hpp"

namespace footfall::tracker {

// Tentative -> {Confirmed, FinalizedDropped}, Confirmed -> FinalizedCounted.
enum class TrackState { kTentative, kConfirmed, kFinalizedCounted, kFinalizedDropped };

std::string_view to_string(TrackState state);

struct Track {
  std::int64_t id = 0;
  TrackState state = TrackState::kTentative;
  BBox last_box;
  int hits = 1;    // associations while alive, including the spawning detection
  int misses = 0;  // consecutive frames without an association
  std::int64_t first_seen_ms = 0;
  std::int64_t last_seen_ms = 0;
};

struct TrackerConfig {
  double iou_threshold = 0.3;
  int min_hits = 3;
  int max_misses = 15;

  /// Throws Error(kInvalidConfig) unless iou_threshold in (0,1), min_hits >= 1, max_misses >= 1.
  void validate() const;
};

struct FrameEvents {
  std::vector<std::int64_t> spawned;
  std::vector<std::int64_t> confirmed;
  std::vector<std::int64_t> finalized_counted;
  std::vector<std::int64_t> finalized_dropped;

  bool empty() const {
    return spawned.empty() && confirmed.empty() && finalized_counted.empty() &&
           finalized_dropped.empty();
  }
  friend bool operator==(const FrameEvents&, const FrameEvents&) = default;
};

struct TrackerTotals {
  std::int64_t spawned = 0;
  std::int64_t counted = 0;
  std::int64_t dropped = 0;
};

/// Track lifecycle for one stream. Each detection that no live track claims
/// spawns a Tentative track; a track is counted once, when a Confirmed track
/// finalizes (misses would exceed max_misses, or flush()).
///
/// Not thread-safe; one instance per stream, stepped sequentially.
class Tracker {
 public:
  explicit Tracker(TrackerConfig config = {},
                   const simd::KernelTable& kernels = simd::active_kernels());

  /// Throws Error(kOutOfOrderFrame) if frame_index does not increase.
  FrameEvents step(const ingest::DetectionFrame& frame);

  /// Finalizes every live track and empties the live set. The frame-order
  /// watermark is kept so the stream can continue afterwards.
  FrameEvents flush();

  std::span<const Track> live_tracks() const { return live_; }
  /// Tracks finalized by the most recent step() or flush(), in id order.
  std::span<const Track> last_finalized() const { return finalized_; }
  const TrackerTotals& totals() const { return totals_; }
  const TrackerConfig& config() const { return config_; }
  std::optional<std::int64_t> last_frame_index() const { return last_frame_index_; }

 private:
  void finalize(Track track, FrameEvents& events);

  TrackerConfig config_;
  const simd::KernelTable* kernels_;
  std::vector<Track> live_;
  std::vector<Track> finalized_;
  std::vector<TrackBox> scratch_boxes_;
  std::int64_t next_id_ = 1;
  std::optional<std::int64_t> last_frame_index_;
  TrackerTotals totals_;
};

}  // namespace footfall::tracker
