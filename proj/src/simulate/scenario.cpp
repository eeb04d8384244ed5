#include "footfall/simulate/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "footfall/error.hpp"
#include "footfall/ingest/wire.hpp"
#include "footfall/simulate/random.hpp"
#include "footfall/tracker/association.hpp"

namespace footfall::simulate {
namespace {

[[noreturn]] void invalid(const std::string& what) {
  throw Error(ErrorCode::kInvalidScenario, what);
}

ingest::BBox centered_box(Point c, double w, double h) {
  ingest::BBox b{c.x - w / 2, c.y - h / 2, c.x + w / 2, c.y + h / 2};
  b.x_min = std::clamp(b.x_min, 0.0, 1.0);
  b.y_min = std::clamp(b.y_min, 0.0, 1.0);
  b.x_max = std::clamp(b.x_max, 0.0, 1.0);
  b.y_max = std::clamp(b.y_max, 0.0, 1.0);
  return b;
}

bool center_fits(Point c, double w, double h) {
  return c.x - w / 2 >= 0.0 && c.x + w / 2 <= 1.0 && c.y - h / 2 >= 0.0 && c.y + h / 2 <= 1.0;
}

}  // namespace

ingest::BBox PersonPath::box_at(std::int64_t frame) const {
  const std::int64_t span = exit_frame - 1 - enter_frame;
  const double t = span > 0 ? static_cast<double>(frame - enter_frame) / static_cast<double>(span) : 0.0;
  const Point c{start_center.x + (end_center.x - start_center.x) * t,
                start_center.y + (end_center.y - start_center.y) * t};
  return centered_box(c, box_w, box_h);
}

void Scenario::validate() const {
  if (!(frame_rate > 0.0)) invalid("frame_rate must be positive");
  if (duration_frames <= 0) invalid("duration_frames must be positive");
  if (stream_id.empty()) invalid("stream_id must not be empty");
  if (!(confidence >= 0.0 && confidence <= 1.0)) invalid("confidence outside [0,1]");
  if (!(noise.jitter_sigma >= 0.0)) invalid("jitter_sigma must be >= 0");
  if (!(noise.dropout_prob >= 0.0 && noise.dropout_prob < 1.0)) invalid("dropout_prob must be in [0,1)");
  if (noise.max_consecutive_dropouts < 0) invalid("max_consecutive_dropouts must be >= 0");
  for (std::size_t i = 0; i < persons.size(); ++i) {
    const PersonPath& p = persons[i];
    const std::string who = "person " + std::to_string(i);
    if (!(p.enter_frame >= 0 && p.enter_frame < p.exit_frame && p.exit_frame <= duration_frames)) {
      invalid(who + ": need 0 <= enter_frame < exit_frame <= duration_frames");
    }
    if (!(p.box_w > 0.0 && p.box_w < 1.0 && p.box_h > 0.0 && p.box_h < 1.0)) {
      invalid(who + ": box extents must be in (0,1)");
    }
    if (!center_fits(p.start_center, p.box_w, p.box_h) || !center_fits(p.end_center, p.box_w, p.box_h)) {
      invalid(who + ": box leaves the frame");
    }
  }
}

std::int64_t Scenario::timestamp_ms(std::int64_t frame) const {
  return start_ms + std::llround(static_cast<double>(frame) * 1000.0 / frame_rate);
}

GeneratedStream generate(const Scenario& scenario) {
  scenario.validate();
  GeneratedStream out;
  out.truth.person_count = static_cast<std::int64_t>(scenario.persons.size());
  for (const PersonPath& p : scenario.persons) out.truth.intervals.push_back({p.enter_frame, p.exit_frame});

  const NoiseSpec& noise = scenario.noise;
  // Offset so noise draws do not share a prefix with random_scenario's layout draws.
  Rng rng(scenario.seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<int> consecutive_drops(scenario.persons.size(), 0);

  out.frames.reserve(static_cast<std::size_t>(scenario.duration_frames));
  for (std::int64_t f = 0; f < scenario.duration_frames; ++f) {
    ingest::DetectionFrame frame;
    frame.stream_id = scenario.stream_id;
    frame.frame_index = f;
    frame.timestamp_ms = scenario.timestamp_ms(f);
    for (std::size_t i = 0; i < scenario.persons.size(); ++i) {
      const PersonPath& p = scenario.persons[i];
      if (!p.present_at(f)) continue;
      if (noise.dropout_prob > 0.0) {
        const bool drop = rng.uniform() < noise.dropout_prob;
        if (drop && consecutive_drops[i] < noise.max_consecutive_dropouts) {
          ++consecutive_drops[i];
          continue;
        }
      }
      consecutive_drops[i] = 0;
      ingest::BBox box = p.box_at(f);
      if (noise.jitter_sigma > 0.0) {
        Point c{(box.x_min + box.x_max) / 2 + noise.jitter_sigma * rng.normal(),
                (box.y_min + box.y_max) / 2 + noise.jitter_sigma * rng.normal()};
        c.x = std::clamp(c.x, p.box_w / 2, 1.0 - p.box_w / 2);
        c.y = std::clamp(c.y, p.box_h / 2, 1.0 - p.box_h / 2);
        box = centered_box(c, p.box_w, p.box_h);
      }
      frame.detections.push_back({box, scenario.confidence});
    }
    out.frames.push_back(std::move(frame));
  }
  return out;
}

namespace {

bool separated(const PersonPath& a, const PersonPath& b, const ScenarioParams& params) {
  const std::int64_t lag = params.separation_lag_frames;
  if (a.exit_frame - 1 + lag < b.enter_frame || b.exit_frame - 1 + lag < a.enter_frame) return true;
  for (std::int64_t tb = b.enter_frame; tb < b.exit_frame; ++tb) {
    const ingest::BBox box_b = b.box_at(tb);
    const std::int64_t lo = std::max(a.enter_frame, tb - lag);
    const std::int64_t hi = std::min(a.exit_frame - 1, tb + lag);
    for (std::int64_t ta = lo; ta <= hi; ++ta) {
      if (tracker::iou(a.box_at(ta), box_b) > params.max_cross_iou) return false;
    }
  }
  return true;
}

}  // namespace

Scenario random_scenario(std::uint64_t seed, int people, const ScenarioParams& params) {
  if (people < 0) invalid("people must be >= 0");
  if (params.min_path_frames < 1 || params.max_path_frames < params.min_path_frames) {
    invalid("path length range is empty");
  }
  if (params.max_concurrent < 1) invalid("max_concurrent must be >= 1");
  if (!(params.min_box_w > 0 && params.min_box_w <= params.max_box_w && params.max_box_w < 1) ||
      !(params.min_box_h > 0 && params.min_box_h <= params.max_box_h && params.max_box_h < 1)) {
    invalid("box extent ranges must lie in (0,1)");
  }

  Scenario s;
  s.seed = seed;
  s.frame_rate = params.frame_rate;
  s.stream_id = params.stream_id;
  s.start_ms = params.start_ms;
  s.noise = params.noise;
  s.duration_frames = params.duration_frames > 0
                          ? params.duration_frames
                          : params.max_path_frames + 40 * static_cast<std::int64_t>(people);
  if (s.duration_frames < params.min_path_frames) invalid("duration shorter than the shortest path");

  Rng rng(seed);
  const std::int64_t self_lag = params.noise.max_consecutive_dropouts + 1;
  std::vector<int> occupancy(static_cast<std::size_t>(s.duration_frames), 0);

  for (int n = 0; n < people; ++n) {
    bool placed = false;
    for (int attempt = 0; attempt < params.max_attempts && !placed; ++attempt) {
      PersonPath p;
      const std::int64_t len = rng.uniform_int(params.min_path_frames,
                                               std::min(params.max_path_frames, s.duration_frames));
      p.enter_frame = rng.uniform_int(0, s.duration_frames - len);
      p.exit_frame = p.enter_frame + len;
      p.box_w = rng.uniform(params.min_box_w, params.max_box_w);
      p.box_h = rng.uniform(params.min_box_h, params.max_box_h);
      p.start_center = {rng.uniform(p.box_w / 2, 1.0 - p.box_w / 2),
                        rng.uniform(p.box_h / 2, 1.0 - p.box_h / 2)};
      const double vx = rng.uniform(-params.max_speed, params.max_speed);
      const double vy = rng.uniform(-params.max_speed, params.max_speed);
      const auto steps = static_cast<double>(len - 1);
      p.end_center = {p.start_center.x + vx * steps, p.start_center.y + vy * steps};

      if (!center_fits(p.end_center, p.box_w, p.box_h)) continue;
      if (len > 1) {
        const std::int64_t lag = std::min(self_lag, len - 1);
        if (tracker::iou(p.box_at(p.enter_frame), p.box_at(p.enter_frame + lag)) < params.min_self_iou) {
          continue;
        }
      }
      bool crowded = false;
      for (std::int64_t f = p.enter_frame; f < p.exit_frame && !crowded; ++f) {
        crowded = occupancy[static_cast<std::size_t>(f)] >= params.max_concurrent;
      }
      if (crowded) continue;
      if (!std::all_of(s.persons.begin(), s.persons.end(),
                       [&](const PersonPath& other) { return separated(other, p, params); })) {
        continue;
      }
      for (std::int64_t f = p.enter_frame; f < p.exit_frame; ++f) ++occupancy[static_cast<std::size_t>(f)];
      s.persons.push_back(p);
      placed = true;
    }
    if (!placed) {
      throw Error(ErrorCode::kUnsatisfiable, "could not place person " + std::to_string(n) +
                                                  " after " + std::to_string(params.max_attempts) +
                                                  " attempts (seed " + std::to_string(seed) + ")");
    }
  }
  std::stable_sort(s.persons.begin(), s.persons.end(), [](const PersonPath& a, const PersonPath& b) {
    return a.enter_frame < b.enter_frame;
  });
  return s;
}

std::string serialize_truth(const GroundTruth& truth) {
  nlohmann::ordered_json doc;
  doc["person_count"] = truth.person_count;
  auto& persons = doc["persons"] = nlohmann::ordered_json::array();
  for (const auto& iv : truth.intervals) {
    nlohmann::ordered_json item;
    item["enter_frame"] = iv.enter_frame;
    item["exit_frame"] = iv.exit_frame;
    persons.push_back(std::move(item));
  }
  return doc.dump();
}

GroundTruth parse_truth(std::string_view text) {
  try {
    const auto doc = nlohmann::json::parse(text);
    GroundTruth truth;
    truth.person_count = doc.at("person_count").get<std::int64_t>();
    for (const auto& item : doc.at("persons")) {
      truth.intervals.push_back({item.at("enter_frame").get<std::int64_t>(),
                                 item.at("exit_frame").get<std::int64_t>()});
    }
    return truth;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedRecord, std::string("truth file: ") + e.what());
  }
}

std::filesystem::path truth_path_for(const std::filesystem::path& stream_path) {
  std::filesystem::path p = stream_path;
  p.replace_extension(".truth");
  return p;
}

void write_files(const GeneratedStream& generated, const std::filesystem::path& stream_path) {
  auto write = [](const std::filesystem::path& path, auto&& body) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kStorageFailure, "cannot open " + path.string() + " for writing");
    body(out);
    out.flush();
    if (!out) throw Error(ErrorCode::kStorageFailure, "write failed: " + path.string());
  };
  write(stream_path, [&](std::ofstream& out) {
    for (const auto& frame : generated.frames) out << ingest::serialize_frame(frame) << '\n';
  });
  write(truth_path_for(stream_path),
        [&](std::ofstream& out) { out << serialize_truth(generated.truth) << '\n'; });
}

}  // namespace footfall::simulate
