#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ontoport/core.hpp"

namespace ontoport {

struct LogEvent {
    std::int64_t timestamp = 0;  // UTC epoch seconds
    std::string student_id;
    std::string action;         // normalized: lowercase, whitespace collapsed
    std::string activity_kind;  // normalized; may be empty

    friend bool operator==(const LogEvent&, const LogEvent&) = default;
};

struct CourseLog {
    std::string course_code;
    std::vector<LogEvent> events;         // sorted ascending by timestamp
    std::map<std::string, double> marks;  // student_id -> final mark in [0,10]
    std::vector<std::string> warnings;    // ingestion diagnostics, not part of equality

    friend bool operator==(const CourseLog& a, const CourseLog& b) {
        return a.course_code == b.course_code && a.events == b.events && a.marks == b.marks;
    }
};

// Lowercase, trim, collapse internal whitespace runs to a single space.
std::string normalize_action(std::string_view raw);

// Log CSV:   course,timestamp,student_id,action,activity_kind
// Marks CSV: student_id,final_mark
// Throws MalformedRow / DuplicateMark / EmptyLog.
CourseLog parse_course_log(std::istream& log_source, std::istream& marks_source,
                           std::string course_code);

// Canonical serialization; parse_course_log on the output reproduces an equal
// CourseLog.
void write_course_log(const CourseLog& course, std::ostream& log_out, std::ostream& marks_out);

// Distinct non-empty activity kinds, excluding resource-only kinds (page,
// url, folder, book, resource). Kinds outside the known activity vocabulary
// still count as activities.
std::set<std::string> distinct_activity_types(const CourseLog& course);

// 0 or 1 -> Low, 2 -> Medium, >=3 -> High.
UsageLevel classify_usage_level(std::size_t activity_type_count);

UsageLevel usage_level(const CourseLog& course);

bool is_known_activity_kind(std::string_view kind);
bool is_resource_kind(std::string_view kind);

}  // namespace ontoport
