#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "footfall/analytics/calendar.hpp"
#include "footfall/analytics/rollup.hpp"

namespace footfall::store {

using analytics::Date;

enum class EventKind { kSpawn, kConfirm, kCount, kDrop, kTransactionSet, kDayClose };

std::string_view to_string(EventKind kind);
std::optional<EventKind> parse_event_kind(std::string_view text);

// spawn / confirm / count / drop
struct TrackPayload {
  std::string stream_id;
  std::int64_t track_id = 0;
  std::int64_t first_seen_ms = 0;
  std::int64_t last_seen_ms = 0;

  friend bool operator==(const TrackPayload&, const TrackPayload&) = default;
};

struct TransactionPayload {
  Date date;
  std::int64_t count = 0;

  friend bool operator==(const TransactionPayload&, const TransactionPayload&) = default;
};

struct DayClosePayload {
  Date date;

  friend bool operator==(const DayClosePayload&, const DayClosePayload&) = default;
};

using Payload = std::variant<TrackPayload, TransactionPayload, DayClosePayload>;

struct EventLogEntry {
  std::int64_t sequence = 0;
  std::int64_t timestamp_ms = 0;
  EventKind kind = EventKind::kSpawn;
  Payload payload;

  friend bool operator==(const EventLogEntry&, const EventLogEntry&) = default;
};

/// One JSON object per line (without the newline):
///   {"sequence":N,"timestamp_ms":N,"kind":"count","payload":{...}}
std::string serialize_entry(const EventLogEntry& entry);
/// Throws Error(kCorruptEntry) if the text is not a well-formed entry.
EventLogEntry parse_entry(std::string_view line);

/// The day an entry belongs to: the payload date for transaction_set and
/// day_close, otherwise the local date of timestamp_ms.
Date entry_date(const EventLogEntry& entry, const analytics::TimeZone& zone);

/// `events-YYYY-MM-DD.log`
std::string log_file_name(const Date& date);

// Fold of log entries into per-day records. Any entry creates its day;
// count entries add a crossing in the local hour of their timestamp;
// transaction_set is last-write-wins in sequence order.
class DailyTable {
 public:
  explicit DailyTable(analytics::TimeZone zone = {}) : zone_(std::move(zone)) {}

  void apply(const EventLogEntry& entry);

  bool contains(const Date& date) const { return days_.contains(date); }
  std::optional<analytics::DayRollup> day(const Date& date) const;
  // Date-ascending.
  std::vector<analytics::DailyRecord> records() const;
  std::vector<analytics::DailyRecord> records(const Date& from, const Date& to) const;
  std::int64_t people_counted(const Date& date) const;
  const analytics::TimeZone& zone() const { return zone_; }

  friend bool operator==(const DailyTable& a, const DailyTable& b);

 private:
  struct Day {
    std::array<std::int64_t, 24> hourly{};
    std::int64_t counted = 0;
    std::optional<std::int64_t> transactions;
    friend bool operator==(const Day&, const Day&) = default;
  };
  static analytics::DayRollup rollup(const Date& date, const Day& day);

  analytics::TimeZone zone_;
  // Days are shared between copies and replaced on write, so a snapshot of
  // the table costs one map copy.
  std::map<Date, std::shared_ptr<const Day>> days_;
};

struct RecoveryReport {
  std::int64_t discarded_lines = 0;
  std::vector<std::string> warnings;
};

struct ReplayResult {
  DailyTable table;
  std::vector<EventLogEntry> entries;  // sequence order
  std::int64_t last_sequence = 0;
  RecoveryReport recovery;
};

/// Reads every `events-*.log` under `dir` and folds the entries in sequence
/// order. Within a file the first corrupt entry (torn last line, unparsable
/// text, or a sequence that does not increase) ends the readable prefix: it
/// and everything after it in that file are discarded and reported.
/// Duplicate sequence numbers across files throw Error(kCorruptEntry).
/// A missing directory is an empty log.
ReplayResult replay(const std::filesystem::path& dir, const analytics::TimeZone& zone);

struct LogOptions {
  // fdatasync each append before acknowledging it.
  bool sync = true;
};

/// Single writer over a data directory. open() repairs torn tails left by a
/// crash by truncating each file to its readable prefix.
/// Move-only; may be handed between threads but never used concurrently.
class EventLog {
 public:
  static EventLog open(const std::filesystem::path& dir, analytics::TimeZone zone,
                       LogOptions options = {});

  EventLog(EventLog&&) noexcept;
  EventLog& operator=(EventLog&&) noexcept;
  EventLog(const EventLog&) = delete;
  EventLog& operator=(const EventLog&) = delete;
  ~EventLog();

  /// entry.sequence must equal last_sequence() + 1, else Error(kSequenceGap).
  /// Returns the acknowledged sequence once the entry is on disk.
  /// Throws Error(kStorageFailure) on I/O errors; the log then refuses further
  /// appends until it is reopened (which repairs any torn tail).
  std::int64_t append(const EventLogEntry& entry);
  /// All-or-nothing sequence check, then one write + sync per touched file.
  std::int64_t append_batch(std::span<const EventLogEntry> entries);

  std::int64_t last_sequence() const { return last_sequence_; }
  const std::filesystem::path& dir() const { return dir_; }
  const analytics::TimeZone& zone() const { return zone_; }
  const RecoveryReport& recovery() const { return recovery_; }

 private:
  EventLog(std::filesystem::path dir, analytics::TimeZone zone, LogOptions options);
  int file_for(const Date& date);
  void close_all() noexcept;

  std::filesystem::path dir_;
  analytics::TimeZone zone_;
  LogOptions options_;
  std::map<Date, int> files_;
  std::int64_t last_sequence_ = 0;
  bool failed_ = false;
  RecoveryReport recovery_;
};

}  // namespace footfall::store
