#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "footfall/ingest/frame.hpp"
#include "footfall/simd/dispatch.hpp"

namespace footfall::tracker {

using ingest::BBox;
using ingest::Detection;

/// Intersection area over union area, in [0, 1]. Both boxes must have positive area.
double iou(const BBox& a, const BBox& b);

struct TrackBox {
  std::int64_t id;
  BBox box;
};

struct Match {
  std::int64_t track_id;
  std::size_t detection_index;

  friend bool operator==(const Match&, const Match&) = default;
};

struct Association {
  std::vector<Match> matches;
  std::vector<std::int64_t> unmatched_tracks;      // input order
  std::vector<std::size_t> unmatched_detections;   // ascending
};

/// Greedy IoU matching. Every (track, detection) pair with IoU >= iou_threshold
/// is ranked by IoU descending, then track id ascending, then detection index
/// ascending; pairs are accepted in that order while both sides are free.
/// Track ids must be unique.
Association associate(std::span<const TrackBox> tracks, std::span<const Detection> detections,
                      double iou_threshold,
                      const simd::KernelTable& kernels = simd::active_kernels());

/// The greedy rule of associate() applied to a precomputed row-major
/// track x detection IoU matrix.
Association greedy_match(std::span<const std::int64_t> track_ids, std::size_t detection_count,
                         std::span<const double> iou_matrix, double iou_threshold);

}  // namespace footfall::tracker
