#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace ontoport {

// Timestamps are UTC seconds since the Unix epoch. The canonical text form is
// "YYYY-MM-DD HH:MM:SS"; an optional trailing "Z" or "+HH:MM"/"-HH:MM" offset
// is accepted on input and folded into UTC.
std::optional<std::int64_t> parse_timestamp(std::string_view text, std::string* error = nullptr);

std::string format_timestamp(std::int64_t epoch_seconds);

// Calendar day index (days since epoch, UTC); used for days-connected counts.
std::int64_t utc_day(std::int64_t epoch_seconds);

// Civil calendar conversions (proleptic Gregorian).
std::int64_t days_from_civil(int year, unsigned month, unsigned day);
void civil_from_days(std::int64_t z, int& year, unsigned& month, unsigned& day);

}  // namespace ontoport
