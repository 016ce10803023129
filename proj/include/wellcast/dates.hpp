#ifndef WELLCAST_DATES_HPP
#define WELLCAST_DATES_HPP

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace wellcast {

/**
 * Calendar date stored as days since 1970-01-01.
 *
 * Arithmetic with whole days is exact; parsing and formatting use the
 * ISO "YYYY-MM-DD" form used by all CSV interfaces.
 */
struct Date {
    int32_t serial = 0;

    static Date from_ymd(int year, int month, int day);
    static Date parse(std::string_view text); // throws DataError on bad input

    std::string str() const;

    Date plus_days(int64_t n) const { return Date{static_cast<int32_t>(serial + n)}; }

    auto operator<=>(const Date&) const = default;
};

/// Whole days from a to b (positive when b is later).
inline int64_t days_between(Date a, Date b) { return int64_t{b.serial} - int64_t{a.serial}; }

} // namespace wellcast

#endif
