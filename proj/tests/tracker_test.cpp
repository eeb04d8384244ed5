#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "footfall/error.hpp"
#include "footfall/simulate/scenario.hpp"
#include "footfall/tracker/association.hpp"
#include "footfall/tracker/tracker.hpp"
#include "support/builders.hpp"

namespace footfall::tracker {
namespace {

using testing::det;
using testing::frame;

TEST(Iou, Examples) {
  const BBox a{0.1, 0.2, 0.4, 0.6};
  EXPECT_EQ(iou(a, a), 1.0);
  EXPECT_EQ(iou({0, 0, 0.1, 0.1}, {0.5, 0.5, 0.6, 0.6}), 0.0);
  // intersection 0.01, union 0.04 + 0.04 - 0.01
  EXPECT_NEAR(iou({0, 0, 0.2, 0.2}, {0.1, 0.1, 0.3, 0.3}), 1.0 / 7.0, 1e-12);
  EXPECT_EQ(iou({0, 0, 0.1, 0.1}, {0.1, 0, 0.2, 0.1}), 0.0);  // touching edges
}

TEST(Iou, SymmetricAndBounded) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 0.5);
  for (int i = 0; i < 1000; ++i) {
    const BBox a{u(rng), u(rng), 0.5 + u(rng), 0.5 + u(rng)};
    const BBox b{u(rng), u(rng), 0.5 + u(rng), 0.5 + u(rng)};
    EXPECT_EQ(iou(a, b), iou(b, a));
    EXPECT_GE(iou(a, b), 0.0);
    EXPECT_LE(iou(a, b), 1.0);
  }
}

TEST(Associate, NoTracksLeavesAllDetectionsUnmatched) {
  const std::vector<Detection> dets{det(0.1, 0.1, 0.2, 0.2), det(0.5, 0.5, 0.6, 0.6)};
  const auto a = associate({}, dets, 0.3);
  EXPECT_TRUE(a.matches.empty());
  EXPECT_EQ(a.unmatched_detections, (std::vector<std::size_t>{0, 1}));
}

TEST(Associate, SingleEligiblePairMatches) {
  const std::vector<TrackBox> tracks{{7, {0.1, 0.1, 0.3, 0.3}}};
  const std::vector<Detection> dets{det(0.1, 0.1, 0.3, 0.28)};  // IoU 0.9
  const auto a = associate(tracks, dets, 0.3);
  EXPECT_EQ(a.matches, (std::vector<Match>{{7, 0}}));
  EXPECT_TRUE(a.unmatched_tracks.empty());
  EXPECT_TRUE(a.unmatched_detections.empty());
}

TEST(GreedyMatch, HighestPairFirstBlocksRowAndColumn) {
  const std::vector<std::int64_t> ids{0, 1};
  const std::vector<double> m{0.6, 0.5, 0.55, 0.1};
  const auto a = greedy_match(ids, 2, m, 0.3);
  EXPECT_EQ(a.matches, (std::vector<Match>{{0, 0}}));
  EXPECT_EQ(a.unmatched_tracks, (std::vector<std::int64_t>{1}));
  EXPECT_EQ(a.unmatched_detections, (std::vector<std::size_t>{1}));
}

// Exhaustive oracle: repeatedly pick the globally best remaining eligible pair.
std::vector<Match> reference_greedy(const std::vector<std::int64_t>& ids, std::size_t n,
                                    const std::vector<double>& m, double threshold) {
  std::vector<bool> used_t(ids.size()), used_d(n);
  std::vector<Match> out;
  for (;;) {
    std::optional<std::pair<std::size_t, std::size_t>> best;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (used_t[i] || used_d[j] || m[i * n + j] < threshold) continue;
        if (!best) {
          best = {i, j};
          continue;
        }
        const double v = m[i * n + j], bv = m[best->first * n + best->second];
        if (v > bv || (v == bv && (ids[i] < ids[best->first] ||
                                   (ids[i] == ids[best->first] && j < best->second)))) {
          best = {i, j};
        }
      }
    }
    if (!best) break;
    used_t[best->first] = used_d[best->second] = true;
    out.push_back({ids[best->first], best->second});
  }
  return out;
}

TEST(GreedyMatch, AgreesWithExhaustiveReference) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t t = rng() % 6, n = rng() % 6;
    std::vector<std::int64_t> ids(t);
    for (std::size_t i = 0; i < t; ++i) ids[i] = static_cast<std::int64_t>(i * 3 + 1);
    std::vector<double> m(t * n);
    for (auto& v : m) v = static_cast<double>(rng() % 10) / 10.0;  // ties on purpose
    auto got = greedy_match(ids, n, m, 0.3);
    auto want = reference_greedy(ids, n, m, 0.3);
    auto key = [](const Match& a, const Match& b) { return a.track_id < b.track_id; };
    std::sort(got.matches.begin(), got.matches.end(), key);
    std::sort(want.begin(), want.end(), key);
    ASSERT_EQ(got.matches, want);
    ASSERT_EQ(got.matches.size() + got.unmatched_tracks.size(), t);
    ASSERT_EQ(got.matches.size() + got.unmatched_detections.size(), n);
  }
}

TEST(Tracker, FirstDetectionSpawnsTentativeTrack) {
  Tracker tracker;
  const auto ev = tracker.step(frame(0, {det(0.1, 0.1, 0.2, 0.4)}));
  EXPECT_EQ(ev.spawned, (std::vector<std::int64_t>{1}));
  ASSERT_EQ(tracker.live_tracks().size(), 1u);
  EXPECT_EQ(tracker.live_tracks()[0].state, TrackState::kTentative);
}

TEST(Tracker, ConfirmsOnThirdHitAndCountsAfterSixteenthMiss) {
  Tracker tracker({0.3, 3, 15});
  std::vector<std::int64_t> confirmed_at, counted_at;
  for (std::int64_t f = 0; f < 40; ++f) {
    std::vector<Detection> dets;
    if (f < 10) dets.push_back(det(0.4, 0.3, 0.5, 0.6));
    const auto ev = tracker.step(frame(f, dets));
    if (!ev.confirmed.empty()) confirmed_at.push_back(f);
    for (std::size_t i = 0; i < ev.finalized_counted.size(); ++i) counted_at.push_back(f);
    EXPECT_TRUE(ev.finalized_dropped.empty());
  }
  EXPECT_EQ(confirmed_at, (std::vector<std::int64_t>{2}));
  EXPECT_EQ(counted_at, (std::vector<std::int64_t>{25}));
  EXPECT_EQ(tracker.totals().counted, 1);
  EXPECT_TRUE(tracker.live_tracks().empty());
}

TEST(Tracker, MissesNeverExceedMax) {
  Tracker tracker({0.3, 3, 4});
  tracker.step(frame(0, {det(0.4, 0.3, 0.5, 0.6)}));
  for (std::int64_t f = 1; f < 10; ++f) {
    tracker.step(frame(f));
    for (const auto& t : tracker.live_tracks()) EXPECT_LE(t.misses, 4);
  }
}

TEST(Tracker, SpuriousDetectionIsDroppedNotCounted) {
  Tracker tracker;
  tracker.step(frame(0, {det(0.4, 0.3, 0.5, 0.6)}));
  FrameEvents total;
  for (std::int64_t f = 1; f <= 20; ++f) {
    const auto ev = tracker.step(frame(f));
    total.finalized_dropped.insert(total.finalized_dropped.end(), ev.finalized_dropped.begin(),
                                   ev.finalized_dropped.end());
    EXPECT_TRUE(ev.finalized_counted.empty());
  }
  EXPECT_EQ(total.finalized_dropped, (std::vector<std::int64_t>{1}));
  EXPECT_EQ(tracker.totals().counted, 0);
  EXPECT_EQ(tracker.totals().dropped, 1);
}

TEST(Tracker, FlushFinalizesByState) {
  Tracker tracker;
  EXPECT_TRUE(tracker.flush().empty());
  for (std::int64_t f = 0; f < 3; ++f) tracker.step(frame(f, {det(0.1, 0.1, 0.2, 0.4)}));
  tracker.step(frame(3, {det(0.1, 0.1, 0.2, 0.4), det(0.7, 0.1, 0.8, 0.4)}));
  const auto ev = tracker.flush();
  EXPECT_EQ(ev.finalized_counted, (std::vector<std::int64_t>{1}));
  EXPECT_EQ(ev.finalized_dropped, (std::vector<std::int64_t>{2}));
  EXPECT_TRUE(tracker.live_tracks().empty());
  EXPECT_TRUE(tracker.flush().empty());
}

TEST(Tracker, FinalizedTracksCarryLifetime) {
  Tracker tracker({0.3, 3, 2});
  for (std::int64_t f = 0; f < 5; ++f) tracker.step(frame(f, {det(0.1, 0.1, 0.2, 0.4)}, 1000 + f * 10));
  for (std::int64_t f = 5; f < 8; ++f) tracker.step(frame(f, {}, 1000 + f * 10));
  ASSERT_EQ(tracker.last_finalized().size(), 1u);
  const Track& t = tracker.last_finalized()[0];
  EXPECT_EQ(t.state, TrackState::kFinalizedCounted);
  EXPECT_EQ(t.first_seen_ms, 1000);
  EXPECT_EQ(t.last_seen_ms, 1040);
  EXPECT_EQ(t.hits, 5);
}

TEST(Tracker, MinHitsOneConfirmsOnSpawn) {
  Tracker tracker({0.3, 1, 2});
  const auto ev = tracker.step(frame(0, {det(0.1, 0.1, 0.2, 0.4)}));
  EXPECT_EQ(ev.spawned, (std::vector<std::int64_t>{1}));
  EXPECT_TRUE(ev.confirmed.empty());
  EXPECT_EQ(tracker.flush().finalized_counted, (std::vector<std::int64_t>{1}));
}

TEST(Tracker, RejectsOutOfOrderFramesAndBadConfig) {
  Tracker tracker;
  tracker.step(frame(3));
  try {
    tracker.step(frame(3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kOutOfOrderFrame);
  }
  EXPECT_THROW(Tracker({0.0, 3, 15}), Error);
  EXPECT_THROW(Tracker({0.3, 0, 15}), Error);
  EXPECT_THROW(Tracker({0.3, 3, 0}), Error);
}

TEST(Tracker, StatesOnlyMoveForwardAndTotalsConserve) {
  const auto g = simulate::generate(simulate::random_scenario(21, 30));
  Tracker tracker;
  std::map<std::int64_t, TrackState> seen;
  for (const auto& f : g.frames) {
    tracker.step(f);
    for (const auto& t : tracker.live_tracks()) {
      auto [it, fresh] = seen.try_emplace(t.id, t.state);
      if (!fresh) {
        EXPECT_FALSE(it->second == TrackState::kConfirmed && t.state == TrackState::kTentative);
        it->second = t.state;
      }
    }
    for (const auto& t : tracker.last_finalized()) {
      EXPECT_TRUE(t.state == TrackState::kFinalizedCounted || t.state == TrackState::kFinalizedDropped);
      EXPECT_EQ(t.state == TrackState::kFinalizedCounted, seen.at(t.id) == TrackState::kConfirmed);
    }
    const auto& totals = tracker.totals();
    ASSERT_EQ(totals.spawned, totals.counted + totals.dropped +
                                  static_cast<std::int64_t>(tracker.live_tracks().size()));
  }
}

TEST(Tracker, DeterministicEventSequence) {
  const auto g = simulate::generate(simulate::random_scenario(5, 25));
  auto run = [&] {
    Tracker tracker;
    std::vector<FrameEvents> out;
    for (const auto& f : g.frames) out.push_back(tracker.step(f));
    out.push_back(tracker.flush());
    return out;
  };
  EXPECT_EQ(run(), run());
}

TEST(Tracker, CountsMatchTruthOnSampleOfNoiseFreeScenarios) {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const auto g = simulate::generate(simulate::random_scenario(seed, 1 + static_cast<int>(seed % 12)));
    Tracker tracker;
    for (const auto& f : g.frames) tracker.step(f);
    tracker.flush();
    EXPECT_EQ(tracker.totals().counted, g.truth.person_count) << "seed " << seed;
  }
}

}  // namespace
}  // namespace footfall::tracker
