#pragma once

#include <compare>
#include <cstdio>
#include <string>

#include "rebal/errors.hpp"

namespace rebal {

/// Civil calendar date, ISO 8601 (YYYY-MM-DD) on the wire.
struct Date {
    int year = 1970;
    int month = 1;
    int day = 1;

    auto operator<=>(const Date&) const = default;

    std::string to_string() const {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
        return buf;
    }
};

inline bool is_leap_year(int y) {
    return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
}

inline int days_in_month(int y, int m) {
    static constexpr int kDays[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == 2 && is_leap_year(y)) return 29;
    return kDays[m - 1];
}

inline Date parse_date(const std::string& text) {
    int y = 0, m = 0, d = 0;
    char extra = 0;
    if (std::sscanf(text.c_str(), "%4d-%2d-%2d%c", &y, &m, &d, &extra) != 3 ||
        text.size() != 10) {
        fail(ErrorCategory::parse, "bad date '" + text + "', expected YYYY-MM-DD");
    }
    if (m < 1 || m > 12 || d < 1 || d > days_in_month(y, m)) {
        fail(ErrorCategory::parse, "invalid calendar date '" + text + "'");
    }
    return Date{y, m, d};
}

inline Date next_day(Date d) {
    if (d.day < days_in_month(d.year, d.month)) return Date{d.year, d.month, d.day + 1};
    if (d.month < 12) return Date{d.year, d.month + 1, 1};
    return Date{d.year + 1, 1, 1};
}

}  // namespace rebal
