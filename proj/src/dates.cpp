#include "stocksent/dates.hpp"

#include <array>
#include <cstdio>

#include "stocksent/errors.hpp"

namespace stocksent {

namespace {

bool all_digits(const std::string& s, std::size_t from, std::size_t count) {
    if (from + count > s.size()) return false;
    for (std::size_t i = from; i < from + count; ++i) {
        if (s[i] < '0' || s[i] > '9') return false;
    }
    return true;
}

int to_int(const std::string& s, std::size_t from, std::size_t count) {
    int v = 0;
    for (std::size_t i = from; i < from + count; ++i) v = v * 10 + (s[i] - '0');
    return v;
}

}  // namespace

std::string Date::to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
    return buf;
}

bool operator==(const Date& a, const Date& b) {
    return a.year == b.year && a.month == b.month && a.day == b.day;
}
bool operator!=(const Date& a, const Date& b) { return !(a == b); }
bool operator<(const Date& a, const Date& b) {
    return days_from_civil(a) < days_from_civil(b);
}
bool operator<=(const Date& a, const Date& b) { return !(b < a); }
bool operator>(const Date& a, const Date& b) { return b < a; }
bool operator>=(const Date& a, const Date& b) { return !(a < b); }

// Howard Hinnant's civil calendar algorithms (public domain construction).
std::int64_t days_from_civil(const Date& d) {
    std::int64_t y = d.year;
    const int m = d.month;
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
                         static_cast<unsigned>(d.day) - 1u;
    const unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

Date civil_from_days(std::int64_t z) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp < 10 ? mp + 3 : mp - 9;
    return Date{static_cast<int>(y + (m <= 2)), static_cast<int>(m), static_cast<int>(d)};
}

int weekday(const Date& d) {
    std::int64_t z = days_from_civil(d);
    return static_cast<int>(((z + 3) % 7 + 7) % 7);
}

bool is_valid_date(int year, int month, int day) {
    if (month < 1 || month > 12 || day < 1) return false;
    static const std::array<int, 12> lengths{31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    int len = lengths[static_cast<std::size_t>(month - 1)];
    const bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
    if (month == 2 && leap) len = 29;
    return day <= len;
}

Date parse_date(const std::string& text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-' || !all_digits(text, 0, 4) ||
        !all_digits(text, 5, 2) || !all_digits(text, 8, 2)) {
        throw ParseError("expected date YYYY-MM-DD, got \"" + text + "\"", 0);
    }
    const int y = to_int(text, 0, 4), m = to_int(text, 5, 2), d = to_int(text, 8, 2);
    if (!is_valid_date(y, m, d)) {
        throw ParseError("invalid calendar date \"" + text + "\"", 0);
    }
    return Date{y, m, d};
}

Timestamp parse_timestamp(const std::string& text) {
    // date part
    if (text.size() < 11) throw ParseError("timestamp too short: \"" + text + "\"", 0);
    Date local = parse_date(text.substr(0, 10));
    char sep = text[10];
    if (sep != ' ' && sep != 'T') {
        throw ParseError("expected ' ' or 'T' after date in \"" + text + "\"", 0);
    }

    // time part HH:MM:SS
    std::size_t p = 11;
    if (!all_digits(text, p, 2) || p + 8 > text.size() || text[p + 2] != ':' ||
        !all_digits(text, p + 3, 2) || text[p + 5] != ':' || !all_digits(text, p + 6, 2)) {
        throw ParseError("expected HH:MM:SS in \"" + text + "\"", 0);
    }
    const int hh = to_int(text, p, 2), mi = to_int(text, p + 3, 2), ss = to_int(text, p + 6, 2);
    if (hh > 23 || mi > 59 || ss > 60) {
        throw ParseError("time of day out of range in \"" + text + "\"", 0);
    }
    p += 8;

    // optional fractional seconds, ignored
    if (p < text.size() && text[p] == '.') {
        ++p;
        while (p < text.size() && text[p] >= '0' && text[p] <= '9') ++p;
    }

    // mandatory offset: Z, +HH:MM, -HH:MM, +HHMM, -HHMM
    if (p >= text.size()) {
        throw ParseError("timestamp lacks a timezone offset: \"" + text + "\"", 0);
    }
    int offset_sec = 0;
    if (text[p] == 'Z') {
        if (p + 1 != text.size()) throw ParseError("trailing data after Z in \"" + text + "\"", 0);
    } else if (text[p] == '+' || text[p] == '-') {
        const int sign = text[p] == '+' ? 1 : -1;
        ++p;
        if (!all_digits(text, p, 2)) {
            throw ParseError("malformed offset in \"" + text + "\"", 0);
        }
        int oh = to_int(text, p, 2);
        p += 2;
        if (p < text.size() && text[p] == ':') ++p;
        if (!all_digits(text, p, 2) || p + 2 != text.size()) {
            throw ParseError("malformed offset in \"" + text + "\"", 0);
        }
        int om = to_int(text, p, 2);
        if (oh > 14 || om > 59) throw ParseError("offset out of range in \"" + text + "\"", 0);
        offset_sec = sign * (oh * 3600 + om * 60);
    } else {
        throw ParseError("timestamp lacks a timezone offset: \"" + text + "\"", 0);
    }

    // shift local time to UTC
    std::int64_t total = static_cast<std::int64_t>(hh) * 3600 + mi * 60 + std::min(ss, 59);
    total -= offset_sec;
    std::int64_t day_shift = 0;
    while (total < 0) {
        total += 86400;
        --day_shift;
    }
    while (total >= 86400) {
        total -= 86400;
        ++day_shift;
    }
    Timestamp ts;
    ts.utc_date = civil_from_days(days_from_civil(local) + day_shift);
    ts.utc_seconds = static_cast<int>(total);
    return ts;
}

}  // namespace stocksent
