#include "footfall/tracker/tracker.hpp"

#include <algorithm>
#include <string>

#include "footfall/error.hpp"

namespace footfall::tracker {

std::string_view to_string(TrackState state) {
  switch (state) {
    case TrackState::kTentative: return "tentative";
    case TrackState::kConfirmed: return "confirmed";
    case TrackState::kFinalizedCounted: return "finalized_counted";
    case TrackState::kFinalizedDropped: return "finalized_dropped";
  }
  return "unknown";
}

void TrackerConfig::validate() const {
  if (!(iou_threshold > 0.0 && iou_threshold < 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "iou_threshold must be in (0,1)");
  }
  if (min_hits < 1) throw Error(ErrorCode::kInvalidConfig, "min_hits must be >= 1");
  if (max_misses < 1) throw Error(ErrorCode::kInvalidConfig, "max_misses must be >= 1");
}

Tracker::Tracker(TrackerConfig config, const simd::KernelTable& kernels)
    : config_(config), kernels_(&kernels) {
  config_.validate();
}

void Tracker::finalize(Track track, FrameEvents& events) {
  if (track.state == TrackState::kConfirmed) {
    track.state = TrackState::kFinalizedCounted;
    events.finalized_counted.push_back(track.id);
    ++totals_.counted;
  } else {
    track.state = TrackState::kFinalizedDropped;
    events.finalized_dropped.push_back(track.id);
    ++totals_.dropped;
  }
  finalized_.push_back(track);
}

FrameEvents Tracker::step(const ingest::DetectionFrame& frame) {
  if (last_frame_index_ && frame.frame_index <= *last_frame_index_) {
    throw Error(ErrorCode::kOutOfOrderFrame,
                "frame_index " + std::to_string(frame.frame_index) + " not after " +
                    std::to_string(*last_frame_index_));
  }
  last_frame_index_ = frame.frame_index;
  finalized_.clear();

  scratch_boxes_.clear();
  for (const Track& t : live_) scratch_boxes_.push_back({t.id, t.last_box});
  const Association assoc =
      associate(scratch_boxes_, frame.detections, config_.iou_threshold, *kernels_);

  FrameEvents events;
  // live_ is id-ordered, so ids can be located by binary search.
  auto find_live = [this](std::int64_t id) {
    return std::lower_bound(live_.begin(), live_.end(), id,
                            [](const Track& t, std::int64_t v) { return t.id < v; });
  };

  for (const Match& m : assoc.matches) {
    Track& t = *find_live(m.track_id);
    t.last_box = frame.detections[m.detection_index].box;
    ++t.hits;
    t.misses = 0;
    t.last_seen_ms = frame.timestamp_ms;
    if (t.state == TrackState::kTentative && t.hits >= config_.min_hits) {
      t.state = TrackState::kConfirmed;
      events.confirmed.push_back(t.id);
    }
  }
  std::sort(events.confirmed.begin(), events.confirmed.end());

  std::vector<Track> survivors;
  survivors.reserve(live_.size() + assoc.unmatched_detections.size());
  std::size_t next_unmatched = 0;
  for (Track& t : live_) {
    const bool unmatched = next_unmatched < assoc.unmatched_tracks.size() &&
                           assoc.unmatched_tracks[next_unmatched] == t.id;
    if (unmatched) {
      ++next_unmatched;
      if (t.misses == config_.max_misses) {
        finalize(t, events);
        continue;
      }
      ++t.misses;
    }
    survivors.push_back(t);
  }

  for (std::size_t j : assoc.unmatched_detections) {
    Track t;
    t.id = next_id_++;
    // With min_hits == 1 the spawning detection already satisfies confirmation;
    // the track is reported only as spawned so the per-frame event lists stay disjoint.
    t.state = config_.min_hits <= 1 ? TrackState::kConfirmed : TrackState::kTentative;
    t.last_box = frame.detections[j].box;
    t.first_seen_ms = t.last_seen_ms = frame.timestamp_ms;
    events.spawned.push_back(t.id);
    ++totals_.spawned;
    survivors.push_back(t);
  }
  live_ = std::move(survivors);
  return events;
}

FrameEvents Tracker::flush() {
  finalized_.clear();
  FrameEvents events;
  for (const Track& t : live_) finalize(t, events);
  live_.clear();
  return events;
}

}  // namespace footfall::tracker
