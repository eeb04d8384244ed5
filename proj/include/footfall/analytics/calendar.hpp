#pragma once

#include <absl/time/time.h>

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace footfall::analytics {

// Calendar date in the store's timezone.
struct Date {
  int year = 1970;
  unsigned month = 1;
  unsigned day = 1;

  std::string to_string() const;  // YYYY-MM-DD
  Date plus_days(int days) const;
  // Days since 1970-01-01.
  std::int64_t serial() const;

  friend auto operator<=>(const Date&, const Date&) = default;
};

/// Parses strict ISO-8601 YYYY-MM-DD; nullopt for anything else or an
/// impossible date.
std::optional<Date> parse_date(std::string_view text);

class TimeZone {
 public:
  TimeZone();  // UTC

  /// IANA name, e.g. "Asia/Kolkata". Throws Error(kInvalidConfig) if unknown.
  static TimeZone load(std::string_view name);

  const std::string& name() const { return name_; }
  Date local_date(std::int64_t epoch_ms) const;
  int local_hour(std::int64_t epoch_ms) const;
  /// Epoch milliseconds of local midnight starting `date`.
  std::int64_t day_start_ms(const Date& date) const;

 private:
  absl::TimeZone zone_;
  std::string name_;
};

}  // namespace footfall::analytics
