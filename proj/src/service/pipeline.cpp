#include "footfall/service/pipeline.hpp"

#include <algorithm>
#include <chrono>

#include "footfall/error.hpp"
#include "footfall/store/csv.hpp"

namespace footfall::service {
namespace {

store::EventLog open_log(const Config& config, const analytics::TimeZone& zone) {
  config.validate();
  return store::EventLog::open(config.data_dir, zone, store::LogOptions{config.sync_writes});
}

}  // namespace

Clock system_clock() {
  return [] {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::system_clock::now().time_since_epoch())
        .count();
  };
}

Pipeline::Pipeline(Config config, Clock clock)
    : config_(std::move(config)),
      clock_(std::move(clock)),
      zone_(analytics::TimeZone::load(config_.timezone)),
      log_(open_log(config_, zone_)),
      table_(zone_),
      recovery_(log_.recovery()) {
  store::ReplayResult replayed = store::replay(config_.data_dir, zone_);
  if (replayed.last_sequence != log_.last_sequence()) {
    throw Error(ErrorCode::kCorruptEntry, "log sequence mismatch after recovery");
  }
  for (auto& w : replayed.recovery.warnings) recovery_.warnings.push_back(std::move(w));
  table_ = std::move(replayed.table);
  std::lock_guard lock(writer_mutex_);
  publish();
}

Pipeline::~Pipeline() = default;

void Pipeline::start() { started_.store(true); }

Date Pipeline::today() const {
  std::lock_guard lock(writer_mutex_);
  return current_date_ ? *current_date_ : zone_.local_date(clock_());
}

void Pipeline::collect(const StreamState& stream, const std::string& stream_id,
                       const tracker::FrameEvents& events, std::int64_t timestamp_ms,
                       std::vector<store::EventLogEntry>& out) {
  auto find = [](std::span<const tracker::Track> tracks, std::int64_t id) -> const tracker::Track& {
    return *std::find_if(tracks.begin(), tracks.end(), [id](const auto& t) { return t.id == id; });
  };
  auto emit = [&](store::EventKind kind, const tracker::Track& t) {
    out.push_back({0, timestamp_ms, kind,
                   store::TrackPayload{stream_id, t.id, t.first_seen_ms, t.last_seen_ms}});
  };
  const auto live = stream.tracker.live_tracks();
  const auto finalized = stream.tracker.last_finalized();
  for (auto id : events.spawned) emit(store::EventKind::kSpawn, find(live, id));
  for (auto id : events.confirmed) emit(store::EventKind::kConfirm, find(live, id));
  for (auto id : events.finalized_counted) emit(store::EventKind::kCount, find(finalized, id));
  for (auto id : events.finalized_dropped) emit(store::EventKind::kDrop, find(finalized, id));
}

void Pipeline::commit(std::vector<store::EventLogEntry>& entries) {
  if (entries.empty()) return;
  std::int64_t seq = log_.last_sequence();
  for (auto& e : entries) e.sequence = ++seq;
  log_.append_batch(entries);
  for (const auto& e : entries) table_.apply(e);
  table_changed_ = true;
}

void Pipeline::publish() {
  auto next = std::make_shared<Snapshot>();
  {
    std::lock_guard lock(snapshot_mutex_);
    if (snapshot_ && !table_changed_) next->table = snapshot_->table;
  }
  if (!next->table) next->table = std::make_shared<const store::DailyTable>(table_);
  table_changed_ = false;

  next->live.date = current_date_ ? *current_date_ : zone_.local_date(clock_());
  next->live.active_tracks = active_tracks_;
  next->live.people_counted_so_far = table_.people_counted(next->live.date);
  next->live.traffic_so_far = analytics::traffic_from_count(next->live.people_counted_so_far).traffic;
  next->live.last_frame_timestamp_ms = last_frame_ms_;
  next->totals = totals_;

  std::lock_guard lock(snapshot_mutex_);
  snapshot_ = std::move(next);
}

std::shared_ptr<const Pipeline::Snapshot> Pipeline::snapshot() const {
  std::lock_guard lock(snapshot_mutex_);
  return snapshot_;
}

void Pipeline::process(const ingest::DetectionFrame& frame) {
  std::lock_guard ingest_lock(ingest_mutex_);
  validator_.check(frame);

  const ingest::DetectionFrame filtered = ingest::filter_confidence(frame, config_.confidence_threshold);
  StreamState& stream = streams_.try_emplace(frame.stream_id, config_.tracker).first->second;
  const Date date = zone_.local_date(frame.timestamp_ms);

  std::vector<store::EventLogEntry> entries;
  std::int64_t counted = 0;
  std::int64_t dropped = 0;
  if (stream.date && date != *stream.date) {
    // Midnight: everything still in view is finalized on the day it was seen.
    const auto events = stream.tracker.flush();
    collect(stream, frame.stream_id, events, stream.last_timestamp_ms, entries);
    counted += static_cast<std::int64_t>(events.finalized_counted.size());
    dropped += static_cast<std::int64_t>(events.finalized_dropped.size());
  }
  const bool new_day = current_date_ && date > *current_date_;
  if (new_day) {
    entries.push_back({0, frame.timestamp_ms, store::EventKind::kDayClose,
                       store::DayClosePayload{*current_date_}});
  }

  const auto events = stream.tracker.step(filtered);
  collect(stream, frame.stream_id, events, frame.timestamp_ms, entries);
  counted += static_cast<std::int64_t>(events.finalized_counted.size());
  dropped += static_cast<std::int64_t>(events.finalized_dropped.size());
  stream.date = date;
  stream.last_timestamp_ms = frame.timestamp_ms;

  std::int64_t active = 0;
  for (const auto& [id, s] : streams_) active += static_cast<std::int64_t>(s.tracker.live_tracks().size());

  std::lock_guard writer_lock(writer_mutex_);
  commit(entries);
  if (!current_date_ || date > *current_date_) current_date_ = date;
  last_frame_ms_ = last_frame_ms_ ? std::max(*last_frame_ms_, frame.timestamp_ms) : frame.timestamp_ms;
  active_tracks_ = active;
  ++totals_.frames;
  totals_.people_counted += counted;
  totals_.dropped += dropped;
  publish();
}

void Pipeline::finish() {
  std::lock_guard ingest_lock(ingest_mutex_);
  std::vector<store::EventLogEntry> entries;
  std::int64_t counted = 0;
  std::int64_t dropped = 0;
  for (auto& [id, stream] : streams_) {
    const auto events = stream.tracker.flush();
    collect(stream, id, events, stream.last_timestamp_ms, entries);
    counted += static_cast<std::int64_t>(events.finalized_counted.size());
    dropped += static_cast<std::int64_t>(events.finalized_dropped.size());
  }
  std::lock_guard writer_lock(writer_mutex_);
  commit(entries);
  active_tracks_ = 0;
  totals_.people_counted += counted;
  totals_.dropped += dropped;
  publish();
}

LiveStatus Pipeline::live() const {
  if (!started()) throw Error(ErrorCode::kServiceUnavailable, "pipeline not started");
  return snapshot()->live;
}

RunTotals Pipeline::totals() const { return snapshot()->totals; }

analytics::DailyRecord Pipeline::set_transactions(const Date& date, std::int64_t count) {
  if (count < 0) throw Error(ErrorCode::kInvalidCount, "transaction count must be >= 0");
  std::lock_guard lock(writer_mutex_);
  const Date today = current_date_ ? *current_date_ : zone_.local_date(clock_());
  if (!table_.contains(date) && date != today) {
    throw Error(ErrorCode::kUnknownDate, "no record for " + date.to_string());
  }
  std::vector<store::EventLogEntry> entries{
      {0, clock_(), store::EventKind::kTransactionSet, store::TransactionPayload{date, count}}};
  commit(entries);
  publish();
  return table_.day(date)->record;
}

std::vector<analytics::DailyRecord> Pipeline::days(const Date& from, const Date& to) const {
  if (to < from) throw Error(ErrorCode::kBadRange, "from " + from.to_string() + " is after to " + to.to_string());
  return snapshot()->table->records(from, to);
}

std::vector<analytics::DailyRecord> Pipeline::all_days() const { return snapshot()->table->records(); }

analytics::HourlyHistogram Pipeline::hourly(const Date& date) const {
  auto day = snapshot()->table->day(date);
  if (!day) throw Error(ErrorCode::kUnknownDate, "no record for " + date.to_string());
  return day->histogram;
}

std::vector<analytics::TrendPoint> Pipeline::trend(const Date& from, const Date& to, int window_days) const {
  if (to < from) throw Error(ErrorCode::kBadRange, "from " + from.to_string() + " is after to " + to.to_string());
  if (window_days < 1) throw Error(ErrorCode::kBadRange, "window must be >= 1");
  // Include the days that feed the first point's window.
  const auto records = snapshot()->table->records(from.plus_days(1 - window_days), to);
  std::vector<analytics::TrendPoint> points;
  for (const auto& p : analytics::trend(records, window_days)) {
    if (!(p.date < from)) points.push_back(p);
  }
  return points;
}

std::string Pipeline::export_csv() const {
  const auto records = snapshot()->table->records();
  return store::export_csv(records);
}

}  // namespace footfall::service
