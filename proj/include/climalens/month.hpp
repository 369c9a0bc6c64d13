#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>

namespace climalens {

// Calendar month, the unit of aggregation for every index and panel join.
struct MonthKey {
    int year = 0;
    int month = 0;  // 1..12

    auto operator<=>(const MonthKey&) const = default;

    MonthKey next() const;
    MonthKey prev() const;

    // Months since year 0, for distances and loops.
    int ordinal() const { return year * 12 + (month - 1); }

    std::string str() const;  // "YYYY-MM"

    // Parses "YYYY-MM"; throws FormatError(0, ...) on malformed input.
    static MonthKey parse(const std::string& s);
};

// Inclusive month range.
struct MonthRange {
    MonthKey start;
    MonthKey end;

    bool contains(const MonthKey& m) const { return start <= m && m <= end; }
    int n_months() const { return end.ordinal() - start.ordinal() + 1; }

    std::string str() const { return start.str() + ".." + end.str(); }

    // Accepts "YYYY-MM..YYYY-MM" or "YYYY-MM:YYYY-MM"; start must not
    // exceed end.
    static MonthRange parse(const std::string& s);
};

// Calendar date. Only validity of the (year, month, day) triple is checked;
// the pipeline never needs day arithmetic beyond ordering.
struct Date {
    int year = 0;
    int month = 0;
    int day = 0;

    auto operator<=>(const Date&) const = default;

    MonthKey month_key() const { return {year, month}; }
    std::string str() const;  // "YYYY-MM-DD"

    // Accepts "YYYY-MM-DD" or the compact "YYYYMMDD" used by published
    // daily factor files.
    static Date parse(const std::string& s);
};

// UTC timestamp to minute precision, as carried by snippets.
struct DateTime {
    Date date;
    int hour = 0;
    int minute = 0;

    auto operator<=>(const DateTime&) const = default;

    std::string str() const;  // "YYYY-MM-DDTHH:MMZ"

    // Accepts ISO-8601 "YYYY-MM-DDTHH:MM[:SS][Z]" with 'T' or ' ' as the
    // separator; seconds are parsed and discarded.
    static DateTime parse(const std::string& s);
};

bool is_valid_date(int year, int month, int day);

}  // namespace climalens
