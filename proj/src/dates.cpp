#include "wellcast/dates.hpp"

#include "wellcast/errors.hpp"

#include <chrono>
#include <cstdio>

namespace wellcast {

namespace {

using days = std::chrono::days;
using sys_days = std::chrono::sys_days;

} // namespace

Date Date::from_ymd(int year, int month, int day) {
    const std::chrono::year_month_day ymd{std::chrono::year{year},
                                          std::chrono::month{static_cast<unsigned>(month)},
                                          std::chrono::day{static_cast<unsigned>(day)}};
    if (!ymd.ok()) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "invalid calendar date %04d-%02d-%02d", year, month, day);
        throw DataError(buf);
    }
    return Date{static_cast<int32_t>(sys_days{ymd}.time_since_epoch().count())};
}

Date Date::parse(std::string_view text) {
    int y = 0, m = 0, d = 0;
    char trail = 0;
    const std::string owned(text);
    if (std::sscanf(owned.c_str(), "%d-%d-%d%c", &y, &m, &d, &trail) != 3) {
        throw DataError("cannot parse date '" + owned + "' (expected YYYY-MM-DD)");
    }
    return from_ymd(y, m, d);
}

std::string Date::str() const {
    const sys_days sd{days{serial}};
    const std::chrono::year_month_day ymd{sd};
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", int(ymd.year()), unsigned(ymd.month()),
                  unsigned(ymd.day()));
    return buf;
}

} // namespace wellcast
