#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "footfall/analytics/rollup.hpp"

namespace footfall::store {

inline constexpr std::string_view kCsvHeader =
    "date,people_counted,traffic,unpaired,transactions,conversion_rate";

/// Header plus one row per record, date-ascending, '\n' line endings.
/// Absent transactions / rate render as empty fields; rates use two decimals.
std::string export_csv(std::span<const analytics::DailyRecord> records);

/// Reads export_csv output back. Derived columns are recomputed and must
/// match the text, otherwise Error(kMalformedRecord) names the row.
std::vector<analytics::DailyRecord> parse_csv(std::string_view text);

}  // namespace footfall::store
