#pragma once

#include <cstdint>
#include <string>

namespace stocksent {

// Proleptic Gregorian calendar date. Comparisons and arithmetic go through
// the day serial number (days since 1970-01-01), so ordering is total and
// gap-aware.
struct Date {
    int year = 1970;
    int month = 1;  // 1..12
    int day = 1;    // 1..31

    std::string to_string() const;  // YYYY-MM-DD
};

bool operator==(const Date& a, const Date& b);
bool operator!=(const Date& a, const Date& b);
bool operator<(const Date& a, const Date& b);
bool operator<=(const Date& a, const Date& b);
bool operator>(const Date& a, const Date& b);
bool operator>=(const Date& a, const Date& b);

// Days since the epoch 1970-01-01 (negative before).
std::int64_t days_from_civil(const Date& d);
Date civil_from_days(std::int64_t z);

// 0 = Monday .. 6 = Sunday.
int weekday(const Date& d);

bool is_valid_date(int year, int month, int day);

// Strict "YYYY-MM-DD". Throws ParseError (line 0) on malformed input.
Date parse_date(const std::string& text);

// UTC timestamp with explicit offset, e.g. "2022-09-29 23:41:16+00:00" or
// "2022-09-29T23:41:16Z". The offset is applied so the result is the UTC
// calendar date and second-of-day.
struct Timestamp {
    Date utc_date;
    int utc_seconds = 0;  // seconds since UTC midnight, 0..86399
};

Timestamp parse_timestamp(const std::string& text);

}  // namespace stocksent
