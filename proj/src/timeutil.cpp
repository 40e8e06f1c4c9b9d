#include "cryptoforecast/timeutil.hpp"

#include <cstdio>

#include "cryptoforecast/error.hpp"

namespace cryptoforecast {

// Howard Hinnant's civil-date algorithms.
std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
                         static_cast<unsigned>(d) - 1u;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& year, int& month, int& day) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    day = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    month = static_cast<int>(mp < 10 ? mp + 3 : mp - 9);
    year = static_cast<int>(y + (month <= 2));
}

namespace {

bool all_digits(const std::string& s, std::size_t from, std::size_t count) {
    if (from + count > s.size()) return false;
    for (std::size_t i = from; i < from + count; ++i)
        if (s[i] < '0' || s[i] > '9') return false;
    return true;
}

int to_int(const std::string& s, std::size_t from, std::size_t count) {
    int v = 0;
    for (std::size_t i = from; i < from + count; ++i) v = v * 10 + (s[i] - '0');
    return v;
}

void check_date_fields(const std::string& text, int y, int mo, int d) {
    static const int days_in_month[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
    int dim = days_in_month[mo - 1] + (mo == 2 && leap ? 1 : 0);
    if (mo < 1 || mo > 12 || d < 1 || d > dim)
        throw ParseError("invalid calendar date: " + text);
}

}  // namespace

Timestamp parse_date(const std::string& text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-' ||
        !all_digits(text, 0, 4) || !all_digits(text, 5, 2) || !all_digits(text, 8, 2))
        throw ParseError("expected YYYY-MM-DD date, got '" + text + "'");
    int y = to_int(text, 0, 4), mo = to_int(text, 5, 2), d = to_int(text, 8, 2);
    check_date_fields(text, y, mo, d);
    return days_from_civil(y, mo, d) * kSecondsPerDay;
}

Timestamp parse_iso8601(const std::string& text) {
    if (text.size() != 20 || text[4] != '-' || text[7] != '-' || text[10] != 'T' ||
        text[13] != ':' || text[16] != ':' || text[19] != 'Z' ||
        !all_digits(text, 0, 4) || !all_digits(text, 5, 2) || !all_digits(text, 8, 2) ||
        !all_digits(text, 11, 2) || !all_digits(text, 14, 2) || !all_digits(text, 17, 2))
        throw ParseError("expected YYYY-MM-DDTHH:MM:SSZ timestamp, got '" + text + "'");
    int y = to_int(text, 0, 4), mo = to_int(text, 5, 2), d = to_int(text, 8, 2);
    int hh = to_int(text, 11, 2), mm = to_int(text, 14, 2), ss = to_int(text, 17, 2);
    check_date_fields(text, y, mo, d);
    if (hh > 23 || mm > 59 || ss > 60)
        throw ParseError("invalid time of day: " + text);
    return days_from_civil(y, mo, d) * kSecondsPerDay + hh * 3600 + mm * 60 + ss;
}

Timestamp day_start(Timestamp t) {
    std::int64_t days = t / kSecondsPerDay;
    if (t < 0 && t % kSecondsPerDay != 0) --days;
    return days * kSecondsPerDay;
}

std::string format_date(Timestamp t) {
    int y, mo, d;
    civil_from_days(day_start(t) / kSecondsPerDay, y, mo, d);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", y, mo, d);
    return buf;
}

std::string format_iso8601(Timestamp t) {
    Timestamp start = day_start(t);
    int y, mo, d;
    civil_from_days(start / kSecondsPerDay, y, mo, d);
    std::int64_t rem = t - start;
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", y, mo, d,
                  static_cast<int>(rem / 3600), static_cast<int>((rem / 60) % 60),
                  static_cast<int>(rem % 60));
    return buf;
}

}  // namespace cryptoforecast
