#include "demobench/detail/time.hpp"

#include <chrono>
#include <cstdio>

#include "demobench/errors.hpp"

namespace demobench::detail {

namespace {

constexpr std::int64_t kSecondsPerDay = 86400;

bool is_leap(int year) {
    return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
}

int days_in_month(int year, int month) {
    static const int kDays[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (month == 2 && is_leap(year)) return 29;
    return kDays[month - 1];
}

// Days since 1970-01-01 for a civil date. Valid for years >= 1970.
std::int64_t days_from_civil(int year, int month, int day) {
    std::int64_t days = 0;
    for (int y = 1970; y < year; ++y) days += is_leap(y) ? 366 : 365;
    for (int m = 1; m < month; ++m) days += days_in_month(year, m);
    return days + (day - 1);
}

}  // namespace

std::int64_t parse_iso8601(const std::string& text) {
    int year = 0, month = 0, day = 0, hour = 0, minute = 0, second = 0;
    char sep = 0, zone = 0;
    int n = std::sscanf(text.c_str(), "%4d-%2d-%2d%c%2d:%2d:%2d%c",
                        &year, &month, &day, &sep, &hour, &minute, &second, &zone);
    bool date_only = (n == 3);
    bool full = (n >= 7) && (sep == 'T' || sep == ' ') && (n == 7 || zone == 'Z');
    if (!date_only && !full) {
        fail(errc::parse_error, "invalid ISO-8601 timestamp: '" + text + "'");
    }
    if (year < 1970 || month < 1 || month > 12 || day < 1 || day > days_in_month(year, month) ||
        hour < 0 || hour > 23 || minute < 0 || minute > 59 || second < 0 || second > 60) {
        fail(errc::parse_error, "out-of-range ISO-8601 timestamp: '" + text + "'");
    }
    return days_from_civil(year, month, day) * kSecondsPerDay +
           hour * 3600LL + minute * 60LL + second;
}

std::string format_iso8601(std::int64_t epoch_seconds) {
    std::int64_t days = epoch_seconds / kSecondsPerDay;
    std::int64_t rem = epoch_seconds % kSecondsPerDay;
    if (rem < 0) {
        rem += kSecondsPerDay;
        days -= 1;
    }
    int year = 1970;
    while (true) {
        int len = is_leap(year) ? 366 : 365;
        if (days < len) break;
        days -= len;
        ++year;
    }
    int month = 1;
    while (days >= days_in_month(year, month)) {
        days -= days_in_month(year, month);
        ++month;
    }
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", year, month,
                  static_cast<int>(days) + 1, static_cast<int>(rem / 3600),
                  static_cast<int>((rem / 60) % 60), static_cast<int>(rem % 60));
    return std::string(buf);
}

std::string now_iso8601() {
    auto now = std::chrono::system_clock::now();
    return format_iso8601(std::chrono::duration_cast<std::chrono::seconds>(
                              now.time_since_epoch()).count());
}

}  // namespace demobench::detail
