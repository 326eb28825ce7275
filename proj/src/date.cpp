#include "levlab/date.hpp"

#include <cctype>
#include <cstdio>

#include "levlab/errors.hpp"

namespace levlab {

namespace {

// Civil <-> serial conversions on the proleptic Gregorian calendar,
// epoch 1970-01-01. Exact for the whole int32 day range.
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    y = static_cast<int>(yy + (m <= 2));
}

bool valid_ymd(int y, int m, int d) {
    if (m < 1 || m > 12 || d < 1) return false;
    static constexpr int len[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    int n = len[m - 1];
    const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
    if (m == 2 && leap) n = 29;
    return d <= n;
}

}  // namespace

Date Date::from_ymd(int year, int month, int day) {
    if (!valid_ymd(year, month, day))
        throw DataError("invalid calendar date " + std::to_string(year) + "-" +
                        std::to_string(month) + "-" + std::to_string(day));
    return Date(static_cast<std::int32_t>(days_from_civil(year, month, day)));
}

Date Date::parse(std::string_view iso) {
    auto digits = [&](std::size_t pos, std::size_t n, int& out) {
        out = 0;
        for (std::size_t i = pos; i < pos + n; ++i) {
            if (i >= iso.size() || !std::isdigit(static_cast<unsigned char>(iso[i]))) return false;
            out = out * 10 + (iso[i] - '0');
        }
        return true;
    };
    int y = 0, m = 0, d = 0;
    if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-' || !digits(0, 4, y) ||
        !digits(5, 2, m) || !digits(8, 2, d))
        throw DataError("malformed date '" + std::string(iso) + "' (want YYYY-MM-DD)");
    return from_ymd(y, m, d);
}

Date::Ymd Date::ymd() const {
    int y, m, d;
    civil_from_days(serial_, y, m, d);
    return {y, m, d};
}

std::string Date::to_string() const {
    const Ymd v = ymd();
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", v.year, v.month, v.day);
    return buf;
}

}  // namespace levlab
