#pragma once

#include <cstdint>
#include <string>

namespace cryptoforecast {

// Seconds since the Unix epoch, always UTC.
using Timestamp = std::int64_t;

constexpr std::int64_t kSecondsPerDay = 86400;

// Civil-date conversions (proleptic Gregorian, UTC only, no TZ database).
std::int64_t days_from_civil(int year, int month, int day);
void civil_from_days(std::int64_t days, int& year, int& month, int& day);

// "YYYY-MM-DD" -> midnight UTC of that day.
Timestamp parse_date(const std::string& text);

// "YYYY-MM-DDTHH:MM:SSZ" -> UTC instant.
Timestamp parse_iso8601(const std::string& text);

std::string format_date(Timestamp t);
std::string format_iso8601(Timestamp t);

// Midnight UTC of the day containing t (floor for pre-epoch instants).
Timestamp day_start(Timestamp t);

}  // namespace cryptoforecast
