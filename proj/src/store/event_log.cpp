#include "footfall/store/event_log.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>
#include <utility>

#include <nlohmann/json.hpp>

#include "footfall/error.hpp"

namespace footfall::store {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

constexpr std::string_view kFilePrefix = "events-";
constexpr std::string_view kFileSuffix = ".log";

[[noreturn]] void corrupt(const std::string& what) { throw Error(ErrorCode::kCorruptEntry, what); }

[[noreturn]] void storage_failure(const std::string& what) {
  throw Error(ErrorCode::kStorageFailure, what + ": " + std::strerror(errno));
}

bool is_track_kind(EventKind kind) {
  return kind == EventKind::kSpawn || kind == EventKind::kConfirm || kind == EventKind::kCount ||
         kind == EventKind::kDrop;
}

void write_all(int fd, std::string_view data, const fs::path& path) {
  while (!data.empty()) {
    const ssize_t n = ::write(fd, data.data(), data.size());
    if (n < 0) {
      if (errno == EINTR) continue;
      storage_failure("write " + path.string());
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
}

void sync_dir(const fs::path& dir) {
  const int fd = ::open(dir.c_str(), O_RDONLY | O_DIRECTORY);
  if (fd < 0) return;
  ::fsync(fd);
  ::close(fd);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kStorageFailure, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

struct FileScan {
  std::vector<EventLogEntry> entries;
  std::size_t readable_bytes = 0;
  std::int64_t discarded_lines = 0;
  std::string problem;
};

// Longest prefix of complete, parsable, sequence-increasing lines.
FileScan scan_file(std::string_view text) {
  FileScan scan;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) {
      scan.problem = "torn final line";
      break;
    }
    try {
      EventLogEntry entry = parse_entry(text.substr(pos, nl - pos));
      if (!scan.entries.empty() && entry.sequence <= scan.entries.back().sequence) {
        scan.problem = "sequence " + std::to_string(entry.sequence) + " does not increase";
        break;
      }
      scan.entries.push_back(std::move(entry));
    } catch (const Error& e) {
      scan.problem = e.detail();
      break;
    }
    pos = nl + 1;
    scan.readable_bytes = pos;
  }
  if (!scan.problem.empty()) {
    std::string_view rest = text.substr(scan.readable_bytes);
    scan.discarded_lines = static_cast<std::int64_t>(std::count(rest.begin(), rest.end(), '\n'));
    if (!rest.empty() && rest.back() != '\n') ++scan.discarded_lines;
  }
  return scan;
}

std::vector<fs::path> log_files(const fs::path& dir) {
  std::vector<fs::path> files;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) return files;
  for (const auto& item : fs::directory_iterator(dir)) {
    const std::string name = item.path().filename().string();
    if (item.is_regular_file() && name.starts_with(kFilePrefix) && name.ends_with(kFileSuffix)) {
      files.push_back(item.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::kSpawn: return "spawn";
    case EventKind::kConfirm: return "confirm";
    case EventKind::kCount: return "count";
    case EventKind::kDrop: return "drop";
    case EventKind::kTransactionSet: return "transaction_set";
    case EventKind::kDayClose: return "day_close";
  }
  return "unknown";
}

std::optional<EventKind> parse_event_kind(std::string_view text) {
  for (EventKind k : {EventKind::kSpawn, EventKind::kConfirm, EventKind::kCount, EventKind::kDrop,
                      EventKind::kTransactionSet, EventKind::kDayClose}) {
    if (to_string(k) == text) return k;
  }
  return std::nullopt;
}

std::string serialize_entry(const EventLogEntry& entry) {
  ordered_json doc;
  doc["sequence"] = entry.sequence;
  doc["timestamp_ms"] = entry.timestamp_ms;
  doc["kind"] = std::string(to_string(entry.kind));
  ordered_json payload;
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, TrackPayload>) {
          payload["stream_id"] = p.stream_id;
          payload["track_id"] = p.track_id;
          payload["first_seen_ms"] = p.first_seen_ms;
          payload["last_seen_ms"] = p.last_seen_ms;
        } else if constexpr (std::is_same_v<T, TransactionPayload>) {
          payload["date"] = p.date.to_string();
          payload["count"] = p.count;
        } else {
          payload["date"] = p.date.to_string();
        }
      },
      entry.payload);
  doc["payload"] = std::move(payload);
  return doc.dump();
}

EventLogEntry parse_entry(std::string_view line) {
  const json doc = json::parse(line.begin(), line.end(), nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) corrupt("entry is not a JSON object");
  try {
    EventLogEntry entry;
    entry.sequence = doc.at("sequence").get<std::int64_t>();
    entry.timestamp_ms = doc.at("timestamp_ms").get<std::int64_t>();
    const auto kind = parse_event_kind(doc.at("kind").get<std::string>());
    if (!kind) corrupt("unknown kind");
    entry.kind = *kind;
    if (entry.sequence < 1) corrupt("sequence must be >= 1");

    const json& p = doc.at("payload");
    auto date_field = [&]() {
      const auto d = analytics::parse_date(p.at("date").get<std::string>());
      if (!d) corrupt("bad payload date");
      return *d;
    };
    if (is_track_kind(entry.kind)) {
      entry.payload = TrackPayload{p.at("stream_id").get<std::string>(), p.at("track_id").get<std::int64_t>(),
                                   p.at("first_seen_ms").get<std::int64_t>(),
                                   p.at("last_seen_ms").get<std::int64_t>()};
    } else if (entry.kind == EventKind::kTransactionSet) {
      const auto count = p.at("count").get<std::int64_t>();
      if (count < 0) corrupt("negative transaction count");
      entry.payload = TransactionPayload{date_field(), count};
    } else {
      entry.payload = DayClosePayload{date_field()};
    }
    return entry;
  } catch (const json::exception& e) {
    corrupt(e.what());
  }
}

Date entry_date(const EventLogEntry& entry, const analytics::TimeZone& zone) {
  if (const auto* t = std::get_if<TransactionPayload>(&entry.payload)) return t->date;
  if (const auto* d = std::get_if<DayClosePayload>(&entry.payload)) return d->date;
  return zone.local_date(entry.timestamp_ms);
}

std::string log_file_name(const Date& date) {
  return std::string(kFilePrefix) + date.to_string() + std::string(kFileSuffix);
}

// --- DailyTable ---------------------------------------------------------

void DailyTable::apply(const EventLogEntry& entry) {
  auto& slot = days_[entry_date(entry, zone_)];
  if (entry.kind == EventKind::kCount) {
    auto day = slot ? std::make_shared<Day>(*slot) : std::make_shared<Day>();
    ++day->hourly[static_cast<std::size_t>(zone_.local_hour(entry.timestamp_ms))];
    ++day->counted;
    slot = std::move(day);
  } else if (const auto* t = std::get_if<TransactionPayload>(&entry.payload)) {
    auto day = slot ? std::make_shared<Day>(*slot) : std::make_shared<Day>();
    day->transactions = t->count;
    slot = std::move(day);
  } else if (!slot) {
    slot = std::make_shared<const Day>();
  }
}

bool operator==(const DailyTable& a, const DailyTable& b) {
  return std::equal(a.days_.begin(), a.days_.end(), b.days_.begin(), b.days_.end(),
                    [](const auto& x, const auto& y) { return x.first == y.first && *x.second == *y.second; });
}

analytics::DayRollup DailyTable::rollup(const Date& date, const Day& day) {
  analytics::DayRollup out;
  out.record = analytics::make_record(date, day.counted, day.transactions);
  out.histogram.date = date;
  out.histogram.buckets = day.hourly;
  return out;
}

std::optional<analytics::DayRollup> DailyTable::day(const Date& date) const {
  auto it = days_.find(date);
  if (it == days_.end()) return std::nullopt;
  return rollup(it->first, *it->second);
}

std::vector<analytics::DailyRecord> DailyTable::records() const {
  std::vector<analytics::DailyRecord> out;
  out.reserve(days_.size());
  for (const auto& [date, day] : days_) out.push_back(rollup(date, *day).record);
  return out;
}

std::vector<analytics::DailyRecord> DailyTable::records(const Date& from, const Date& to) const {
  std::vector<analytics::DailyRecord> out;
  for (auto it = days_.lower_bound(from); it != days_.end() && it->first <= to; ++it) {
    out.push_back(rollup(it->first, *it->second).record);
  }
  return out;
}

std::int64_t DailyTable::people_counted(const Date& date) const {
  auto it = days_.find(date);
  return it == days_.end() ? 0 : it->second->counted;
}

// --- replay ---------------------------------------------------------------

ReplayResult replay(const fs::path& dir, const analytics::TimeZone& zone) {
  ReplayResult result{DailyTable(zone), {}, 0, {}};
  for (const fs::path& file : log_files(dir)) {
    FileScan scan = scan_file(read_file(file));
    if (!scan.problem.empty()) {
      result.recovery.discarded_lines += scan.discarded_lines;
      result.recovery.warnings.push_back(file.filename().string() + ": " + scan.problem + ", discarded " +
                                         std::to_string(scan.discarded_lines) + " line(s)");
    }
    for (auto& e : scan.entries) result.entries.push_back(std::move(e));
  }
  std::sort(result.entries.begin(), result.entries.end(),
            [](const EventLogEntry& a, const EventLogEntry& b) { return a.sequence < b.sequence; });
  std::int64_t expected = 1;
  for (const EventLogEntry& e : result.entries) {
    if (e.sequence < expected) corrupt("duplicate sequence " + std::to_string(e.sequence));
    if (e.sequence > expected) {
      result.recovery.warnings.push_back("sequence gap: " + std::to_string(expected) + ".." +
                                         std::to_string(e.sequence - 1) + " missing");
    }
    expected = e.sequence + 1;
    result.table.apply(e);
  }
  result.last_sequence = expected - 1;
  return result;
}

// --- EventLog -------------------------------------------------------------

EventLog::EventLog(fs::path dir, analytics::TimeZone zone, LogOptions options)
    : dir_(std::move(dir)), zone_(std::move(zone)), options_(options) {}

EventLog::EventLog(EventLog&& other) noexcept
    : dir_(std::move(other.dir_)),
      zone_(std::move(other.zone_)),
      options_(other.options_),
      files_(std::exchange(other.files_, {})),
      last_sequence_(other.last_sequence_),
      failed_(other.failed_),
      recovery_(std::move(other.recovery_)) {}

EventLog& EventLog::operator=(EventLog&& other) noexcept {
  if (this != &other) {
    close_all();
    dir_ = std::move(other.dir_);
    zone_ = std::move(other.zone_);
    options_ = other.options_;
    files_ = std::exchange(other.files_, {});
    last_sequence_ = other.last_sequence_;
    failed_ = other.failed_;
    recovery_ = std::move(other.recovery_);
  }
  return *this;
}

EventLog::~EventLog() { close_all(); }

void EventLog::close_all() noexcept {
  for (auto& [date, fd] : files_) ::close(fd);
  files_.clear();
}

EventLog EventLog::open(const fs::path& dir, analytics::TimeZone zone, LogOptions options) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kStorageFailure, "cannot create " + dir.string() + ": " + ec.message());

  EventLog log(dir, std::move(zone), options);
  for (const fs::path& file : log_files(dir)) {
    const std::string text = read_file(file);
    const FileScan scan = scan_file(text);
    if (scan.problem.empty()) {
      if (!scan.entries.empty()) log.last_sequence_ = std::max(log.last_sequence_, scan.entries.back().sequence);
      continue;
    }
    fs::resize_file(file, scan.readable_bytes, ec);
    if (ec) throw Error(ErrorCode::kStorageFailure, "cannot truncate " + file.string() + ": " + ec.message());
    log.recovery_.discarded_lines += scan.discarded_lines;
    log.recovery_.warnings.push_back(file.filename().string() + ": " + scan.problem + ", truncated " +
                                     std::to_string(scan.discarded_lines) + " line(s)");
    if (!scan.entries.empty()) log.last_sequence_ = std::max(log.last_sequence_, scan.entries.back().sequence);
  }
  return log;
}

int EventLog::file_for(const Date& date) {
  if (auto it = files_.find(date); it != files_.end()) return it->second;
  const fs::path path = dir_ / log_file_name(date);
  const bool existed = fs::exists(path);
  const int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd < 0) storage_failure("open " + path.string());
  if (!existed && options_.sync) sync_dir(dir_);
  files_.emplace(date, fd);
  return fd;
}

std::int64_t EventLog::append(const EventLogEntry& entry) {
  return append_batch(std::span<const EventLogEntry>(&entry, 1));
}

std::int64_t EventLog::append_batch(std::span<const EventLogEntry> entries) {
  if (failed_) throw Error(ErrorCode::kStorageFailure, "log is unusable after an earlier failure; reopen it");
  std::int64_t expected = last_sequence_ + 1;
  for (const EventLogEntry& e : entries) {
    if (e.sequence != expected) {
      throw Error(ErrorCode::kSequenceGap, "expected sequence " + std::to_string(expected) + ", got " +
                                               std::to_string(e.sequence));
    }
    ++expected;
  }

  std::map<Date, std::string> chunks;
  for (const EventLogEntry& e : entries) {
    std::string& chunk = chunks[entry_date(e, zone_)];
    chunk += serialize_entry(e);
    chunk += '\n';
  }
  try {
    for (const auto& [date, chunk] : chunks) {
      const int fd = file_for(date);
      write_all(fd, chunk, dir_ / log_file_name(date));
      if (options_.sync && ::fdatasync(fd) != 0) storage_failure("fdatasync " + log_file_name(date));
    }
  } catch (const Error&) {
    failed_ = true;
    throw;
  }
  last_sequence_ = expected - 1;
  return last_sequence_;
}

}  // namespace footfall::store
