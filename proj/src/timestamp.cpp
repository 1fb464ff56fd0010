#include "ontoport/timestamp.hpp"

#include <array>
#include <cstdio>

namespace ontoport {

std::int64_t days_from_civil(int y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& year, unsigned& month, unsigned& day) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    day = doy - (153 * mp + 2) / 5 + 1;
    month = mp + (mp < 10 ? 3 : -9);
    year = static_cast<int>(y + (month <= 2));
}

static bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

static unsigned days_in_month(int y, unsigned m) {
    static constexpr std::array<unsigned, 12> k = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == 2 && is_leap(y)) return 29;
    return k[m - 1];
}

namespace {
struct Cursor {
    std::string_view s;
    std::size_t pos = 0;
    bool fail = false;

    int digits(int n) {
        int v = 0;
        for (int i = 0; i < n; ++i) {
            if (pos >= s.size() || s[pos] < '0' || s[pos] > '9') {
                fail = true;
                return 0;
            }
            v = v * 10 + (s[pos++] - '0');
        }
        return v;
    }

    bool literal(char c) {
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        fail = true;
        return false;
    }
};
}  // namespace

std::optional<std::int64_t> parse_timestamp(std::string_view text, std::string* error) {
    // trim surrounding whitespace
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) text.remove_suffix(1);

    Cursor c{text};
    const int year = c.digits(4);
    c.literal('-');
    const int month = c.digits(2);
    c.literal('-');
    const int day = c.digits(2);
    if (!c.fail) {
        // 'T' separator tolerated alongside the canonical space
        if (c.pos < text.size() && (text[c.pos] == ' ' || text[c.pos] == 'T')) ++c.pos;
        else c.fail = true;
    }
    const int hour = c.digits(2);
    c.literal(':');
    const int minute = c.digits(2);
    c.literal(':');
    const int second = c.digits(2);

    std::int64_t offset = 0;
    if (!c.fail && c.pos < text.size()) {
        const char sign = text[c.pos];
        if (sign == 'Z' && c.pos + 1 == text.size()) {
            ++c.pos;
        } else if (sign == '+' || sign == '-') {
            ++c.pos;
            const int oh = c.digits(2);
            c.literal(':');
            const int om = c.digits(2);
            offset = (sign == '-' ? -1 : 1) * (oh * 3600LL + om * 60LL);
            if (!c.fail && (oh > 23 || om > 59)) c.fail = true;
        } else {
            c.fail = true;
        }
    }
    if (!c.fail && c.pos != text.size()) c.fail = true;

    if (c.fail) {
        if (error) *error = "expected 'YYYY-MM-DD HH:MM:SS' with optional offset";
        return std::nullopt;
    }
    if (month < 1 || month > 12 || day < 1 ||
        day > static_cast<int>(days_in_month(year, static_cast<unsigned>(month))) || hour > 23 ||
        minute > 59 || second > 59) {
        if (error) *error = "timestamp field out of range";
        return std::nullopt;
    }

    const std::int64_t days = days_from_civil(year, static_cast<unsigned>(month), static_cast<unsigned>(day));
    return days * 86400 + hour * 3600 + minute * 60 + second - offset;
}

std::string format_timestamp(std::int64_t t) {
    std::int64_t days = t / 86400;
    std::int64_t rem = t % 86400;
    if (rem < 0) {
        rem += 86400;
        --days;
    }
    int year;
    unsigned month, day;
    civil_from_days(days, year, month, day);
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u %02lld:%02lld:%02lld", year, month, day,
                  static_cast<long long>(rem / 3600), static_cast<long long>(rem % 3600 / 60),
                  static_cast<long long>(rem % 60));
    return buf;
}

std::int64_t utc_day(std::int64_t t) {
    std::int64_t d = t / 86400;
    if (t % 86400 < 0) --d;
    return d;
}

}  // namespace ontoport
