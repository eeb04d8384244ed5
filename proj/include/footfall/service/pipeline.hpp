#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "footfall/analytics/calendar.hpp"
#include "footfall/analytics/rollup.hpp"
#include "footfall/ingest/frame.hpp"
#include "footfall/ingest/wire.hpp"
#include "footfall/service/config.hpp"
#include "footfall/store/event_log.hpp"
#include "footfall/tracker/tracker.hpp"

namespace footfall::service {

using analytics::Date;

struct LiveStatus {
  Date date;
  std::int64_t active_tracks = 0;
  std::int64_t people_counted_so_far = 0;
  std::int64_t traffic_so_far = 0;  // floor(people_counted_so_far / 2)
  std::optional<std::int64_t> last_frame_timestamp_ms;

  friend bool operator==(const LiveStatus&, const LiveStatus&) = default;
};

struct RunTotals {
  std::int64_t frames = 0;
  std::int64_t people_counted = 0;
  std::int64_t dropped = 0;
};

using Clock = std::function<std::int64_t()>;  // epoch milliseconds
Clock system_clock();

/// ingest -> tracker -> event log -> daily table, plus the operator queries.
///
/// Frames are processed by one sequential caller at a time (process() and
/// finish() serialize on an ingest lock). Transaction writes share the
/// single log writer under a writer lock. Queries read an immutable snapshot
/// published after every frame, so they never see a half-applied frame and
/// never hold a lock the frame path waits on for longer than a pointer copy.
class Pipeline {
 public:
  /// Opens (and repairs) the event log in config.data_dir and rebuilds the
  /// table from it. Throws Error(kInvalidConfig) / Error(kStorageFailure).
  explicit Pipeline(Config config, Clock clock = system_clock());
  ~Pipeline();

  Pipeline(const Pipeline&) = delete;
  Pipeline& operator=(const Pipeline&) = delete;

  /// Makes live() available. Queries other than live() work before start().
  void start();
  bool started() const { return started_.load(); }

  /// Validates ordering, filters by confidence, closes the previous local day
  /// if this frame starts a new one, steps the stream's tracker and persists
  /// its events. Throws Error(kOutOfOrderFrame) and leaves state unchanged.
  void process(const ingest::DetectionFrame& frame);
  /// Finalizes every live track of every stream (end of input).
  void finish();

  /// Throws Error(kServiceUnavailable) before start().
  LiveStatus live() const;
  /// Throws Error(kInvalidCount) for count < 0, Error(kUnknownDate) unless the
  /// date has a record or is today.
  analytics::DailyRecord set_transactions(const Date& date, std::int64_t count);
  /// Inclusive range, date-ascending. Throws Error(kBadRange) if from > to.
  std::vector<analytics::DailyRecord> days(const Date& from, const Date& to) const;
  std::vector<analytics::DailyRecord> all_days() const;
  /// Throws Error(kUnknownDate).
  analytics::HourlyHistogram hourly(const Date& date) const;
  std::vector<analytics::TrendPoint> trend(const Date& from, const Date& to, int window_days) const;
  std::string export_csv() const;

  RunTotals totals() const;
  const Config& config() const { return config_; }
  const store::RecoveryReport& recovery() const { return recovery_; }
  Date today() const;

 private:
  struct StreamState {
    explicit StreamState(const tracker::TrackerConfig& c) : tracker(c) {}
    tracker::Tracker tracker;
    std::optional<Date> date;
    std::int64_t last_timestamp_ms = 0;
  };

  struct Snapshot {
    std::shared_ptr<const store::DailyTable> table;
    LiveStatus live;
    RunTotals totals;
  };

  void collect(const StreamState& stream, const std::string& stream_id,
               const tracker::FrameEvents& events, std::int64_t timestamp_ms,
               std::vector<store::EventLogEntry>& out);
  void commit(std::vector<store::EventLogEntry>& entries);  // writer lock held by caller
  void publish();                                           // writer lock held by caller
  std::shared_ptr<const Snapshot> snapshot() const;

  Config config_;
  Clock clock_;
  analytics::TimeZone zone_;
  std::atomic<bool> started_{false};

  std::mutex ingest_mutex_;
  ingest::StreamValidator validator_;
  std::map<std::string, StreamState> streams_;

  // Guarded by writer_mutex_; written only on the frame path.
  mutable std::mutex writer_mutex_;
  std::optional<Date> current_date_;
  std::optional<std::int64_t> last_frame_ms_;
  std::int64_t active_tracks_ = 0;
  RunTotals totals_;
  store::EventLog log_;
  store::DailyTable table_;
  bool table_changed_ = true;
  store::RecoveryReport recovery_;

  mutable std::mutex snapshot_mutex_;
  std::shared_ptr<const Snapshot> snapshot_;
};

}  // namespace footfall::service
