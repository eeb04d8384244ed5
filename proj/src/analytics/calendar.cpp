#include "footfall/analytics/calendar.hpp"

#include <absl/time/civil_time.h>

#include <charconv>
#include <chrono>
#include <cstdio>

#include "footfall/error.hpp"

namespace footfall::analytics {
namespace {

std::chrono::year_month_day to_ymd(const Date& d) {
  return std::chrono::year_month_day{std::chrono::year{d.year}, std::chrono::month{d.month},
                                     std::chrono::day{d.day}};
}

Date from_ymd(const std::chrono::year_month_day& ymd) {
  return {static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
          static_cast<unsigned>(ymd.day())};
}

Date from_civil(const absl::CivilSecond& c) {
  return {static_cast<int>(c.year()), static_cast<unsigned>(c.month()),
          static_cast<unsigned>(c.day())};
}

}  // namespace

std::string Date::to_string() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", year, month, day);
  return buf;
}

Date Date::plus_days(int days) const {
  return from_ymd(std::chrono::year_month_day{std::chrono::sys_days{to_ymd(*this)} +
                                              std::chrono::days{days}});
}

std::int64_t Date::serial() const {
  return std::chrono::sys_days{to_ymd(*this)}.time_since_epoch().count();
}

std::optional<Date> parse_date(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  auto field = [&](std::size_t pos, std::size_t len, auto& out) {
    for (std::size_t i = pos; i < pos + len; ++i) {
      if (text[i] < '0' || text[i] > '9') return false;
    }
    return std::from_chars(text.data() + pos, text.data() + pos + len, out).ec == std::errc{};
  };
  Date d;
  if (!field(0, 4, d.year) || !field(5, 2, d.month) || !field(8, 2, d.day)) return std::nullopt;
  if (!to_ymd(d).ok()) return std::nullopt;
  return d;
}

TimeZone::TimeZone() : zone_(absl::UTCTimeZone()), name_("UTC") {}

TimeZone TimeZone::load(std::string_view name) {
  TimeZone tz;
  if (!absl::LoadTimeZone(std::string(name), &tz.zone_)) {
    throw Error(ErrorCode::kInvalidConfig, "unknown timezone '" + std::string(name) + "'");
  }
  tz.name_ = std::string(name);
  return tz;
}

Date TimeZone::local_date(std::int64_t epoch_ms) const {
  return from_civil(absl::ToCivilSecond(absl::FromUnixMillis(epoch_ms), zone_));
}

int TimeZone::local_hour(std::int64_t epoch_ms) const {
  return absl::ToCivilHour(absl::FromUnixMillis(epoch_ms), zone_).hour();
}

std::int64_t TimeZone::day_start_ms(const Date& date) const {
  const absl::CivilDay day(date.year, date.month, date.day);
  return absl::ToUnixMillis(absl::FromCivil(day, zone_));
}

}  // namespace footfall::analytics
