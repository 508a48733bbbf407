#include "gapmap/dates.hpp"

#include <array>
#include <charconv>
#include <cstdio>

namespace gapmap {

namespace {

bool is_leap(int y) {
    return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
}

// Howard Hinnant's days-from-civil algorithm.
long long days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const long long era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<long long>(doe) - 719468;
}

std::optional<int> parse_int(std::string_view s) {
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
    return v;
}

}  // namespace

int days_in_month(int year, int month) {
    static constexpr std::array<int, 12> k = {31, 28, 31, 30, 31, 30,
                                              31, 31, 30, 31, 30, 31};
    if (month < 1 || month > 12) return 0;
    if (month == 2 && is_leap(year)) return 29;
    return k[month - 1];
}

bool is_valid_date(int year, int month, int day) {
    return month >= 1 && month <= 12 && day >= 1 &&
           day <= days_in_month(year, month);
}

long long Date::serial() const { return days_from_civil(year, month, day); }

std::string Date::to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
    return buf;
}

long long days_between(const Date& a, const Date& b) {
    return b.serial() - a.serial();
}

std::optional<Date> parse_date(const std::string& text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
    auto y = parse_int(std::string_view(text).substr(0, 4));
    auto m = parse_int(std::string_view(text).substr(5, 2));
    auto d = parse_int(std::string_view(text).substr(8, 2));
    if (!y || !m || !d || !is_valid_date(*y, *m, *d)) return std::nullopt;
    return Date{*y, *m, *d};
}

std::optional<DateSpan> parse_date_or_month(const std::string& text) {
    if (auto d = parse_date(text)) return DateSpan{*d, *d};
    if (text.size() == 7 && text[4] == '-') {
        auto y = parse_int(std::string_view(text).substr(0, 4));
        auto m = parse_int(std::string_view(text).substr(5, 2));
        if (!y || !m || *m < 1 || *m > 12) return std::nullopt;
        return DateSpan{Date{*y, *m, 1}, Date{*y, *m, days_in_month(*y, *m)}};
    }
    return std::nullopt;
}

}  // namespace gapmap
