#include "footfall/analytics/rollup.hpp"

#include <algorithm>
#include <string>

#include "footfall/error.hpp"

namespace footfall::analytics {

TrafficSplit traffic_from_count(std::int64_t people_counted) {
  if (people_counted < 0) throw Error(ErrorCode::kInvalidCount, "people_counted must be >= 0");
  return {people_counted / 2, people_counted % 2};
}

std::string ConversionRate::format_2dp() const {
  // Hundredths of a percent: transactions * 10000 / traffic, rounded half up.
  const __int128 scaled = static_cast<__int128>(transactions_) * 10000;
  __int128 q = scaled / traffic_;
  const __int128 r = scaled % traffic_;
  if (2 * r >= traffic_) ++q;
  const auto whole = static_cast<long long>(q / 100);
  const auto frac = static_cast<int>(q % 100);
  std::string out = std::to_string(whole);
  out += '.';
  out += static_cast<char>('0' + frac / 10);
  out += static_cast<char>('0' + frac % 10);
  return out;
}

ConversionRate conversion_rate(std::int64_t transactions, std::int64_t traffic) {
  if (transactions < 0) throw Error(ErrorCode::kInvalidCount, "transactions must be >= 0");
  if (traffic < 0) throw Error(ErrorCode::kInvalidCount, "traffic must be >= 0");
  if (traffic == 0) throw Error(ErrorCode::kNoTraffic, "conversion rate undefined for zero traffic");
  return {transactions, traffic};
}

DailyRecord make_record(const Date& date, std::int64_t people_counted,
                        std::optional<std::int64_t> transactions) {
  DailyRecord record;
  record.date = date;
  record.people_counted = people_counted;
  const TrafficSplit split = traffic_from_count(people_counted);
  record.traffic = split.traffic;
  record.unpaired = split.unpaired;
  record.transactions = transactions;
  if (transactions && split.traffic > 0) {
    record.conversion_rate = conversion_rate(*transactions, split.traffic);
  }
  return record;
}

std::int64_t HourlyHistogram::total() const {
  std::int64_t sum = 0;
  for (auto b : buckets) sum += b;
  return sum;
}

std::optional<int> HourlyHistogram::peak_hour() const {
  auto it = std::max_element(buckets.begin(), buckets.end());
  if (*it == 0) return std::nullopt;
  return static_cast<int>(it - buckets.begin());
}

DayRollup rollup_day(const Date& date, std::span<const std::int64_t> counted_timestamps_ms,
                     std::optional<std::int64_t> transactions, const TimeZone& zone) {
  DayRollup out;
  out.histogram.date = date;
  for (std::int64_t ts : counted_timestamps_ms) {
    if (zone.local_date(ts) != date) {
      throw Error(ErrorCode::kDateMismatch, "event at " + std::to_string(ts) + " ms is not on " +
                                                date.to_string() + " in " + zone.name());
    }
    ++out.histogram.buckets[static_cast<std::size_t>(zone.local_hour(ts))];
  }
  out.record = make_record(date, static_cast<std::int64_t>(counted_timestamps_ms.size()),
                           transactions);
  return out;
}

std::vector<TrendPoint> trend(std::span<const DailyRecord> records, int window_days) {
  if (window_days < 1) throw Error(ErrorCode::kBadRange, "window must be >= 1 day");
  std::vector<TrendPoint> out;
  out.reserve(records.size());
  std::size_t head = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const std::int64_t end = records[i].date.serial();
    while (records[head].date.serial() <= end - window_days) ++head;

    double traffic_sum = 0.0;
    double rate_sum = 0.0;
    int rate_days = 0;
    for (std::size_t j = head; j <= i; ++j) {
      traffic_sum += static_cast<double>(records[j].traffic);
      if (records[j].conversion_rate) {
        rate_sum += records[j].conversion_rate->percent();
        ++rate_days;
      }
    }
    TrendPoint p;
    p.date = records[i].date;
    p.traffic_average = traffic_sum / static_cast<double>(i - head + 1);
    if (rate_days > 0) p.conversion_average = rate_sum / rate_days;
    out.push_back(p);
  }
  return out;
}

}  // namespace footfall::analytics
