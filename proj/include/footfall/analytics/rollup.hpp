#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "footfall/analytics/calendar.hpp"

namespace footfall::analytics {

struct TrafficSplit {
  std::int64_t traffic = 0;
  std::int64_t unpaired = 0;  // 0 or 1

  friend bool operator==(const TrafficSplit&, const TrafficSplit&) = default;
};

/// Every visitor crosses the entrance twice (in and out), so traffic is half
/// the raw count. An odd count leaves one unpaired crossing.
TrafficSplit traffic_from_count(std::int64_t people_counted);

/// transactions / traffic * 100, held as the exact fraction. Not capped at
/// 100: a visitor may make several transactions.
class ConversionRate {
 public:
  ConversionRate(std::int64_t transactions, std::int64_t traffic)
      : transactions_(transactions), traffic_(traffic) {}

  std::int64_t transactions() const { return transactions_; }
  std::int64_t traffic() const { return traffic_; }

  // Correctly rounded from the exact quotient.
  double percent() const {
    return static_cast<double>(transactions_) * 100.0 / static_cast<double>(traffic_);
  }

  /// Percentage with exactly two decimals, rounded half up, e.g. "22.50".
  std::string format_2dp() const;

  friend bool operator==(const ConversionRate& a, const ConversionRate& b) {
    return static_cast<__int128>(a.transactions_) * b.traffic_ ==
           static_cast<__int128>(b.transactions_) * a.traffic_;
  }

 private:
  std::int64_t transactions_;
  std::int64_t traffic_;
};

/// Throws Error(kNoTraffic) when traffic == 0 and Error(kInvalidCount) for
/// negative inputs.
ConversionRate conversion_rate(std::int64_t transactions, std::int64_t traffic);

struct DailyRecord {
  Date date;
  std::int64_t people_counted = 0;
  std::int64_t traffic = 0;
  std::int64_t unpaired = 0;
  std::optional<std::int64_t> transactions;
  // Present iff transactions are present and traffic > 0.
  std::optional<ConversionRate> conversion_rate;

  friend bool operator==(const DailyRecord&, const DailyRecord&) = default;
};

DailyRecord make_record(const Date& date, std::int64_t people_counted,
                        std::optional<std::int64_t> transactions);

struct HourlyHistogram {
  Date date;
  std::array<std::int64_t, 24> buckets{};

  std::int64_t total() const;
  // Earliest hour holding the largest bucket; nullopt if every bucket is 0.
  std::optional<int> peak_hour() const;

  friend bool operator==(const HourlyHistogram&, const HourlyHistogram&) = default;
};

struct DayRollup {
  DailyRecord record;
  HourlyHistogram histogram;
};

/// Builds a day's record from the timestamps of its counted finalizations.
/// Throws Error(kDateMismatch) if a timestamp is not on `date` in `zone`.
DayRollup rollup_day(const Date& date, std::span<const std::int64_t> counted_timestamps_ms,
                     std::optional<std::int64_t> transactions, const TimeZone& zone);

struct TrendPoint {
  Date date;
  double traffic_average = 0.0;
  std::optional<double> conversion_average;
};

/// Trailing moving averages over the `window_days` calendar days ending at
/// each record (fewer at the head). Days without a conversion rate are left
/// out of the conversion average. Records must be date-sorted; window_days >= 1.
std::vector<TrendPoint> trend(std::span<const DailyRecord> records, int window_days);

}  // namespace footfall::analytics
