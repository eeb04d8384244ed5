#include "footfall/tracker/association.hpp"

#include <algorithm>

namespace footfall::tracker {

double iou(const BBox& a, const BBox& b) {
  const double iw = std::max(0.0, std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min));
  const double ih = std::max(0.0, std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min));
  const double inter = iw * ih;
  return inter / (a.area() + b.area() - inter);
}

Association associate(std::span<const TrackBox> tracks, std::span<const Detection> detections,
                      double iou_threshold, const simd::KernelTable& kernels) {
  const std::size_t n = detections.size();
  std::vector<double> columns(4 * n);
  for (std::size_t j = 0; j < n; ++j) {
    const BBox& b = detections[j].box;
    columns[j] = b.x_min;
    columns[n + j] = b.y_min;
    columns[2 * n + j] = b.x_max;
    columns[3 * n + j] = b.y_max;
  }
  const simd::BoxColumns others{columns.data(), columns.data() + n, columns.data() + 2 * n,
                                columns.data() + 3 * n, n};

  std::vector<std::int64_t> ids(tracks.size());
  std::vector<double> matrix(tracks.size() * n);
  for (std::size_t i = 0; i < tracks.size(); ++i) {
    const BBox& t = tracks[i].box;
    const double box[4] = {t.x_min, t.y_min, t.x_max, t.y_max};
    kernels.iou_row(box, others, matrix.data() + i * n);
    ids[i] = tracks[i].id;
  }
  return greedy_match(ids, n, matrix, iou_threshold);
}

Association greedy_match(std::span<const std::int64_t> track_ids, std::size_t detection_count,
                         std::span<const double> iou_matrix, double iou_threshold) {
  struct Candidate {
    double iou;
    std::int64_t track_id;
    std::size_t track_index;
    std::size_t detection_index;
  };
  const std::size_t n = detection_count;
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < track_ids.size(); ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double v = iou_matrix[i * n + j];
      if (v >= iou_threshold) candidates.push_back({v, track_ids[i], i, j});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.iou != b.iou) return a.iou > b.iou;
    if (a.track_id != b.track_id) return a.track_id < b.track_id;
    return a.detection_index < b.detection_index;
  });

  Association result;
  std::vector<bool> track_used(track_ids.size(), false);
  std::vector<bool> detection_used(n, false);
  for (const Candidate& c : candidates) {
    if (track_used[c.track_index] || detection_used[c.detection_index]) continue;
    track_used[c.track_index] = true;
    detection_used[c.detection_index] = true;
    result.matches.push_back({c.track_id, c.detection_index});
  }
  for (std::size_t i = 0; i < track_ids.size(); ++i) {
    if (!track_used[i]) result.unmatched_tracks.push_back(track_ids[i]);
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!detection_used[j]) result.unmatched_detections.push_back(j);
  }
  return result;
}

}  // namespace footfall::tracker
