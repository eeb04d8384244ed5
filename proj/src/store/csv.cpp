#include "footfall/store/csv.hpp"

#include <algorithm>
#include <charconv>
#include <optional>

#include "footfall/error.hpp"

namespace footfall::store {
namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = line.find(sep, pos);
    fields.push_back(line.substr(pos, next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return fields;
}

std::optional<std::int64_t> parse_int(std::string_view text) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  return v;
}

[[noreturn]] void fail(std::size_t row, const std::string& what) {
  throw Error(ErrorCode::kMalformedRecord, "csv row " + std::to_string(row) + ": " + what);
}

}  // namespace

std::string export_csv(std::span<const analytics::DailyRecord> records) {
  std::vector<const analytics::DailyRecord*> sorted;
  sorted.reserve(records.size());
  for (const auto& r : records) sorted.push_back(&r);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const auto* a, const auto* b) { return a->date < b->date; });

  std::string out(kCsvHeader);
  out += '\n';
  for (const auto* r : sorted) {
    out += r->date.to_string();
    out += ',' + std::to_string(r->people_counted);
    out += ',' + std::to_string(r->traffic);
    out += ',' + std::to_string(r->unpaired);
    out += ',';
    if (r->transactions) out += std::to_string(*r->transactions);
    out += ',';
    if (r->conversion_rate) out += r->conversion_rate->format_2dp();
    out += '\n';
  }
  return out;
}

std::vector<analytics::DailyRecord> parse_csv(std::string_view text) {
  std::vector<std::string_view> lines = split(text, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty() || lines.front() != kCsvHeader) fail(1, "missing or wrong header");

  std::vector<analytics::DailyRecord> records;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto fields = split(lines[i], ',');
    if (fields.size() != 6) fail(i + 1, "expected 6 fields");
    const auto date = analytics::parse_date(fields[0]);
    const auto counted = parse_int(fields[1]);
    if (!date || !counted || *counted < 0) fail(i + 1, "bad date or people_counted");
    std::optional<std::int64_t> transactions;
    if (!fields[4].empty()) {
      transactions = parse_int(fields[4]);
      if (!transactions || *transactions < 0) fail(i + 1, "bad transactions");
    }
    const analytics::DailyRecord record = analytics::make_record(*date, *counted, transactions);
    if (std::to_string(record.traffic) != fields[2] || std::to_string(record.unpaired) != fields[3]) {
      fail(i + 1, "traffic/unpaired inconsistent with people_counted");
    }
    const std::string rate = record.conversion_rate ? record.conversion_rate->format_2dp() : "";
    if (rate != fields[5]) fail(i + 1, "conversion_rate inconsistent with transactions/traffic");
    records.push_back(record);
  }
  return records;
}

}  // namespace footfall::store
