#pragma once

#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>

namespace covpanel {

// Calendar date stored as a serial day count (days since 1970-01-01,
// proleptic Gregorian). Civil conversions use Howard Hinnant's algorithms.
// Value type, safe to copy and share across threads.
class Date {
public:
    Date() = default;
    explicit Date(std::int32_t serial) : serial_(serial) {}

    static Date from_ymd(int year, int month, int day) {
        if (month < 1 || month > 12 || day < 1 || day > days_in_month(year, month)) {
            char buf[48];
            std::snprintf(buf, sizeof(buf), "invalid calendar date %04d-%02d-%02d", year, month, day);
            throw std::invalid_argument(buf);
        }
        return Date(days_from_civil(year, month, day));
    }

    // Parse "YYYY-MM-DD". Throws std::invalid_argument on malformed input.
    static Date parse_iso(std::string_view s) {
        auto digit = [](char c) { return c >= '0' && c <= '9'; };
        if (s.size() != 10 || s[4] != '-' || s[7] != '-')
            throw std::invalid_argument("invalid ISO date (expected YYYY-MM-DD): " + std::string(s));
        for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u})
            if (!digit(s[i]))
                throw std::invalid_argument("invalid ISO date (expected YYYY-MM-DD): " + std::string(s));
        int y = (s[0] - '0') * 1000 + (s[1] - '0') * 100 + (s[2] - '0') * 10 + (s[3] - '0');
        int m = (s[5] - '0') * 10 + (s[6] - '0');
        int d = (s[8] - '0') * 10 + (s[9] - '0');
        return from_ymd(y, m, d);
    }

    std::int32_t serial() const { return serial_; }

    int year() const { int y, m, d; civil_from_days(serial_, y, m, d); return y; }
    int month() const { int y, m, d; civil_from_days(serial_, y, m, d); return m; }
    int day() const { int y, m, d; civil_from_days(serial_, y, m, d); return d; }

    std::string to_iso() const {
        int y, m, d;
        civil_from_days(serial_, y, m, d);
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", y, m, d);
        return buf;
    }

    // 0 = Monday .. 6 = Sunday (1970-01-01 was a Thursday).
    int weekday_mon0() const {
        return static_cast<int>(((serial_ % 7) + 7 + 3) % 7);
    }

    Date plus_days(std::int32_t n) const { return Date(serial_ + n); }

    friend std::int32_t operator-(Date a, Date b) { return a.serial_ - b.serial_; }
    friend bool operator==(Date a, Date b) { return a.serial_ == b.serial_; }
    friend bool operator!=(Date a, Date b) { return a.serial_ != b.serial_; }
    friend bool operator<(Date a, Date b) { return a.serial_ < b.serial_; }
    friend bool operator<=(Date a, Date b) { return a.serial_ <= b.serial_; }
    friend bool operator>(Date a, Date b) { return a.serial_ > b.serial_; }
    friend bool operator>=(Date a, Date b) { return a.serial_ >= b.serial_; }

private:
    static bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

    static int days_in_month(int y, int m) {
        static constexpr int lengths[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
        return m == 2 && is_leap(y) ? 29 : lengths[m - 1];
    }

    static std::int32_t days_from_civil(int y, int m, int d) {
        y -= m <= 2;
        const int era = (y >= 0 ? y : y - 399) / 400;
        const unsigned yoe = static_cast<unsigned>(y - era * 400);
        const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
                             static_cast<unsigned>(d) - 1u;
        const unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
        return era * 146097 + static_cast<std::int32_t>(doe) - 719468;
    }

    static void civil_from_days(std::int32_t z, int& y, int& m, int& d) {
        z += 719468;
        const int era = (z >= 0 ? z : z - 146096) / 146097;
        const unsigned doe = static_cast<unsigned>(z - era * 146097);
        const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
        const int yr = static_cast<int>(yoe) + era * 400;
        const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
        const unsigned mp = (5 * doy + 2) / 153;
        d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
        m = static_cast<int>(mp < 10 ? mp + 3 : mp - 9);
        y = yr + (m <= 2);
    }

    std::int32_t serial_ = 0;
};

}  // namespace covpanel
