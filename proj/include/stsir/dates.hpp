#pragma once

#include <cstdint>
#include <cstdio>
#include <string>

#include "stsir/errors.hpp"

namespace stsir {

namespace detail {

// Proleptic Gregorian day count (Howard Hinnant's civil calendar algorithms).
inline std::int64_t days_from_civil(int y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

inline void civil_from_days(std::int64_t z, int& y, unsigned& m, unsigned& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t yr = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp + (mp < 10 ? 3 : -9);
    y = static_cast<int>(yr + (m <= 2));
}

} // namespace detail

/// Calendar day stored as days since 1970-01-01.
class Date {
public:
    Date() = default;
    explicit Date(std::int64_t days) : days_(days) {}

    static Date from_ymd(int y, int m, int d) {
        if (m < 1 || m > 12 || d < 1 || d > 31)
            throw DataError("invalid calendar date " + std::to_string(y) + "-" +
                            std::to_string(m) + "-" + std::to_string(d));
        Date out(detail::days_from_civil(y, static_cast<unsigned>(m), static_cast<unsigned>(d)));
        int yy;
        unsigned mm, dd;
        detail::civil_from_days(out.days_, yy, mm, dd);
        if (yy != y || static_cast<int>(mm) != m || static_cast<int>(dd) != d)
            throw DataError("invalid calendar date " + std::to_string(y) + "-" +
                            std::to_string(m) + "-" + std::to_string(d));
        return out;
    }

    /// Parses "YYYY-MM-DD".
    static Date parse(const std::string& iso) {
        int y = 0, m = 0, d = 0;
        char tail = 0;
        if (std::sscanf(iso.c_str(), "%d-%d-%d%c", &y, &m, &d, &tail) != 3)
            throw DataError("cannot parse date '" + iso + "' (expected YYYY-MM-DD)");
        return from_ymd(y, m, d);
    }

    std::string to_string() const {
        int y;
        unsigned m, d;
        detail::civil_from_days(days_, y, m, d);
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", y, m, d);
        return buf;
    }

    std::int64_t days() const { return days_; }

    Date& operator++() {
        ++days_;
        return *this;
    }
    friend Date operator+(Date a, std::int64_t n) { return Date(a.days_ + n); }
    friend std::int64_t operator-(Date a, Date b) { return a.days_ - b.days_; }
    auto operator<=>(const Date&) const = default;

private:
    std::int64_t days_ = 0;
};

} // namespace stsir
