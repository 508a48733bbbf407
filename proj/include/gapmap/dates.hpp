#pragma once

#include <compare>
#include <optional>
#include <string>

namespace gapmap {

// Proleptic Gregorian calendar date. Arithmetic goes through a civil-day
// serial number so spans across month/year boundaries are exact.
struct Date {
    int year = 0;
    int month = 1;  // 1..12
    int day = 1;    // 1..31

    auto operator<=>(const Date&) const = default;

    // Days since 1970-01-01 (negative before).
    long long serial() const;

    std::string to_string() const;  // YYYY-MM-DD
};

bool is_valid_date(int year, int month, int day);
int days_in_month(int year, int month);

// Inclusive day count from a to b; negative when b precedes a.
long long days_between(const Date& a, const Date& b);

// Accepts "YYYY-MM-DD" and "YYYY-MM". A month-only date yields the span
// (first day, last day) of that month; a full date yields (d, d).
struct DateSpan {
    Date start;
    Date end;
};
std::optional<DateSpan> parse_date_or_month(const std::string& text);

std::optional<Date> parse_date(const std::string& text);

}  // namespace gapmap
