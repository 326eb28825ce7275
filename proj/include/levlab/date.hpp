#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace levlab {

/// Proleptic-Gregorian calendar day stored as a serial day count
/// (0 = 1970-01-01). Cheap to copy and to do day arithmetic on.
class Date {
  public:
    constexpr Date() = default;
    static constexpr Date from_serial(std::int32_t days) { return Date(days); }
    static Date from_ymd(int year, int month, int day);

    /// Parses strict ISO-8601 "YYYY-MM-DD". Throws DataError on anything else.
    static Date parse(std::string_view iso);

    constexpr std::int32_t serial() const { return serial_; }

    struct Ymd {
        int year;
        int month;
        int day;
    };
    Ymd ymd() const;

    std::string to_string() const;  // "YYYY-MM-DD"

    constexpr Date operator+(int days) const { return Date(serial_ + days); }
    constexpr Date operator-(int days) const { return Date(serial_ - days); }
    constexpr std::int32_t operator-(Date other) const { return serial_ - other.serial_; }
    Date& operator++() {
        ++serial_;
        return *this;
    }
    auto operator<=>(const Date&) const = default;

  private:
    constexpr explicit Date(std::int32_t s) : serial_(s) {}
    std::int32_t serial_ = 0;
};

/// Inclusive day range [start, end].
struct DateRange {
    Date start;
    Date end;
    std::int32_t days() const { return end - start + 1; }
};

}  // namespace levlab
