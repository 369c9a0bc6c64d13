#include "climalens/month.hpp"

#include <cctype>
#include <cstdio>

#include "climalens/errors.hpp"

namespace climalens {

namespace {

bool all_digits(const std::string& s, size_t from, size_t to) {
    if (to > s.size() || from >= to) return false;
    for (size_t i = from; i < to; ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

int to_int(const std::string& s, size_t from, size_t to) {
    int v = 0;
    for (size_t i = from; i < to; ++i) v = v * 10 + (s[i] - '0');
    return v;
}

}  // namespace

MonthKey MonthKey::next() const {
    if (month == 12) return {year + 1, 1};
    return {year, month + 1};
}

MonthKey MonthKey::prev() const {
    if (month == 1) return {year - 1, 12};
    return {year, month - 1};
}

std::string MonthKey::str() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d", year, month);
    return buf;
}

MonthKey MonthKey::parse(const std::string& s) {
    if (s.size() != 7 || s[4] != '-' || !all_digits(s, 0, 4) || !all_digits(s, 5, 7))
        throw FormatError("bad month '" + s + "', expected YYYY-MM");
    MonthKey m{to_int(s, 0, 4), to_int(s, 5, 7)};
    if (m.month < 1 || m.month > 12)
        throw FormatError("bad month '" + s + "', month out of range");
    return m;
}

MonthRange MonthRange::parse(const std::string& s) {
    size_t sep = s.find("..");
    size_t skip = 2;
    if (sep == std::string::npos) {
        sep = s.find(':');
        skip = 1;
    }
    if (sep == std::string::npos)
        throw FormatError("bad month range '" + s + "', expected YYYY-MM..YYYY-MM");
    MonthRange r{MonthKey::parse(s.substr(0, sep)), MonthKey::parse(s.substr(sep + skip))};
    if (r.end < r.start)
        throw FormatError("month range start after end: '" + s + "'");
    return r;
}

bool is_valid_date(int year, int month, int day) {
    if (year < 1 || month < 1 || month > 12 || day < 1) return false;
    static const int days[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    int dmax = days[month - 1];
    bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
    if (month == 2 && leap) dmax = 29;
    return day <= dmax;
}

std::string Date::str() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
    return buf;
}

Date Date::parse(const std::string& s) {
    Date d;
    if (s.size() == 10 && s[4] == '-' && s[7] == '-' &&
        all_digits(s, 0, 4) && all_digits(s, 5, 7) && all_digits(s, 8, 10)) {
        d = {to_int(s, 0, 4), to_int(s, 5, 7), to_int(s, 8, 10)};
    } else if (s.size() == 8 && all_digits(s, 0, 8)) {
        d = {to_int(s, 0, 4), to_int(s, 4, 6), to_int(s, 6, 8)};
    } else {
        throw FormatError("bad date '" + s + "', expected YYYY-MM-DD or YYYYMMDD");
    }
    if (!is_valid_date(d.year, d.month, d.day))
        throw FormatError("invalid calendar date '" + s + "'");
    return d;
}

std::string DateTime::str() const {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%sT%02d:%02dZ", date.str().c_str(), hour, minute);
    return buf;
}

DateTime DateTime::parse(const std::string& s) {
    // YYYY-MM-DD[T ]HH:MM[:SS][Z]
    if (s.size() < 16 || (s[10] != 'T' && s[10] != ' ') || s[13] != ':')
        throw FormatError("bad timestamp '" + s + "', expected YYYY-MM-DDTHH:MM[:SS][Z]");
    DateTime dt;
    dt.date = Date::parse(s.substr(0, 10));
    if (!all_digits(s, 11, 13) || !all_digits(s, 14, 16))
        throw FormatError("bad timestamp '" + s + "'");
    dt.hour = to_int(s, 11, 13);
    dt.minute = to_int(s, 14, 16);
    if (dt.hour > 23 || dt.minute > 59)
        throw FormatError("timestamp out of range '" + s + "'");
    size_t rest = 16;
    if (rest < s.size() && s[rest] == ':') {
        if (!all_digits(s, rest + 1, rest + 3) || to_int(s, rest + 1, rest + 3) > 60)
            throw FormatError("bad seconds in timestamp '" + s + "'");
        rest += 3;
    }
    if (rest < s.size() && s[rest] == 'Z') ++rest;
    if (rest != s.size())
        throw FormatError("trailing characters in timestamp '" + s + "'");
    return dt;
}

}  // namespace climalens
