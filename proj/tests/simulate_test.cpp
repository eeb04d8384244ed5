#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "footfall/error.hpp"
#include "footfall/ingest/wire.hpp"
#include "footfall/simulate/random.hpp"
#include "footfall/simulate/scenario.hpp"
#include "support/temp_dir.hpp"

namespace footfall::simulate {
namespace {

// Independent overlap oracle; deliberately not the tracker's iou().
double overlap_ratio(const ingest::BBox& a, const ingest::BBox& b) {
  const double w = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
  const double h = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
  if (w <= 0 || h <= 0) return 0.0;
  const double inter = w * h;
  return inter / ((a.x_max - a.x_min) * (a.y_max - a.y_min) + (b.x_max - b.x_min) * (b.y_max - b.y_min) - inter);
}

PersonPath still_person(std::int64_t enter, std::int64_t exit, double x) {
  return PersonPath{enter, exit, {x, 0.5}, {x, 0.5}, 0.1, 0.3};
}

std::string serialize_stream(const GeneratedStream& g) {
  std::string out;
  for (const auto& f : g.frames) out += ingest::serialize_frame(f) + "\n";
  return out;
}

TEST(Generate, SinglePersonOneDetectionPerFrame) {
  Scenario s;
  s.duration_frames = 10;
  s.persons = {still_person(0, 10, 0.5)};
  const auto g = generate(s);
  ASSERT_EQ(g.frames.size(), 10u);
  for (const auto& f : g.frames) EXPECT_EQ(f.detections.size(), 1u);
  EXPECT_EQ(g.truth.person_count, 1);
}

TEST(Generate, NoPersonsGivesEmptyFrames) {
  Scenario s;
  s.duration_frames = 25;
  const auto g = generate(s);
  ASSERT_EQ(g.frames.size(), 25u);
  for (const auto& f : g.frames) EXPECT_TRUE(f.detections.empty());
  EXPECT_EQ(g.truth.person_count, 0);
}

TEST(Generate, DetectionCountsFollowIntervalMembership) {
  Scenario s;
  s.duration_frames = 40;
  s.persons = {still_person(0, 12, 0.15), still_person(5, 30, 0.5), still_person(20, 40, 0.85)};
  const auto g = generate(s);
  for (std::int64_t f = 0; f < 40; ++f) {
    std::size_t expected = 0;
    for (const auto& iv : g.truth.intervals) expected += (iv.enter_frame <= f && f < iv.exit_frame) ? 1 : 0;
    EXPECT_EQ(g.frames[static_cast<std::size_t>(f)].detections.size(), expected) << "frame " << f;
  }
}

TEST(Generate, TimestampsFollowFrameRate) {
  Scenario s;
  s.duration_frames = 4;
  s.frame_rate = 30;
  s.start_ms = 1000;
  const auto g = generate(s);
  EXPECT_EQ(g.frames[0].timestamp_ms, 1000);
  EXPECT_EQ(g.frames[1].timestamp_ms, 1033);
  EXPECT_EQ(g.frames[2].timestamp_ms, 1067);
  EXPECT_EQ(g.frames[3].timestamp_ms, 1100);
}

TEST(Generate, RejectsInvalidScenarios) {
  Scenario s;
  s.duration_frames = 10;
  s.persons = {still_person(5, 20, 0.5)};
  EXPECT_THROW(generate(s), Error);
  s.persons = {still_person(0, 5, 0.01)};
  EXPECT_THROW(generate(s), Error);
  s.persons = {};
  s.noise.dropout_prob = 1.0;
  EXPECT_THROW(generate(s), Error);
}

TEST(Generate, DropoutRunsNeverExceedCap) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Scenario s;
    s.seed = seed;
    s.duration_frames = 300;
    s.persons = {still_person(0, 300, 0.5)};
    s.noise = {0.0, 0.7, 4};
    const auto g = generate(s);
    int run = 0, longest = 0, dropped = 0;
    for (const auto& f : g.frames) {
      if (f.detections.empty()) {
        ++run;
        ++dropped;
      } else {
        run = 0;
      }
      longest = std::max(longest, run);
    }
    EXPECT_LE(longest, 4);
    EXPECT_GT(dropped, 0);
  }
}

TEST(RandomScenario, SameSeedSameScenario) {
  const auto a = serialize_stream(generate(random_scenario(7, 20)));
  const auto b = serialize_stream(generate(random_scenario(7, 20)));
  EXPECT_EQ(a, b);
  EXPECT_NE(a, serialize_stream(generate(random_scenario(8, 20))));
}

TEST(RandomScenario, ZeroPeopleIsEmpty) {
  const auto s = random_scenario(3, 0);
  EXPECT_TRUE(s.persons.empty());
  const auto g = generate(s);
  for (const auto& f : g.frames) EXPECT_TRUE(f.detections.empty());
}

TEST(RandomScenario, PairwiseOverlapBoundedAcrossAllFrames) {
  const ScenarioParams params;
  for (std::uint64_t seed : {42ULL, 1ULL, 2ULL, 3ULL}) {
    const auto s = random_scenario(seed, 5, params);
    ASSERT_EQ(s.persons.size(), 5u);
    const auto g = generate(s);
    for (const auto& f : g.frames) {
      for (std::size_t i = 0; i < f.detections.size(); ++i) {
        for (std::size_t j = i + 1; j < f.detections.size(); ++j) {
          ASSERT_LE(overlap_ratio(f.detections[i].box, f.detections[j].box), 0.2)
              << "seed " << seed << " frame " << f.frame_index;
        }
      }
    }
  }
}

TEST(RandomScenario, RespectsConcurrencyCap) {
  ScenarioParams params;
  params.max_concurrent = 3;
  const auto g = generate(random_scenario(5, 40, params));
  for (const auto& f : g.frames) EXPECT_LE(f.detections.size(), 3u);
  EXPECT_EQ(g.truth.person_count, 40);
}

TEST(RandomScenario, BoxesStayInsideFrame) {
  const auto g = generate(random_scenario(12, 30));
  for (const auto& f : g.frames) {
    for (const auto& d : f.detections) EXPECT_TRUE(d.box.is_valid());
  }
}

TEST(RandomScenario, RejectsBadParameters) {
  EXPECT_THROW(random_scenario(1, -1), Error);
  ScenarioParams p;
  p.max_concurrent = 0;
  EXPECT_THROW(random_scenario(1, 3, p), Error);
}

TEST(Truth, SerializationRoundTrips) {
  const auto g = generate(random_scenario(9, 7));
  EXPECT_EQ(parse_truth(serialize_truth(g.truth)), g.truth);
}

TEST(Truth, WriteFilesProducesStreamAndTruth) {
  testing::TempDir dir;
  const auto g = generate(random_scenario(4, 6));
  write_files(g, dir / "day.ndjson");
  EXPECT_EQ(truth_path_for(dir / "day.ndjson"), dir / "day.truth");
  std::ifstream stream(dir / "day.ndjson");
  std::stringstream text;
  text << stream.rdbuf();
  EXPECT_EQ(text.str(), serialize_stream(g));
  std::ifstream truth(dir / "day.truth");
  std::stringstream t;
  t << truth.rdbuf();
  EXPECT_EQ(parse_truth(t.str()), g.truth);
}

TEST(Rng, UniformStaysInRangeAndIsReproducible) {
  Rng a(77), b(77);
  for (int i = 0; i < 10000; ++i) {
    const double u = a.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    ASSERT_EQ(u, b.uniform());
    const auto k = a.uniform_int(-3, 3);
    b.uniform_int(-3, 3);
    ASSERT_GE(k, -3);
    ASSERT_LE(k, 3);
  }
}

}  // namespace
}  // namespace footfall::simulate
