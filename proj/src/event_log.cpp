#include "ontoport/event_log.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>

#include "ontoport/csv.hpp"
#include "ontoport/timestamp.hpp"

namespace ontoport {

namespace {

constexpr std::array<std::string_view, 14> kActivityKinds = {
    "assignment", "quiz",   "forum",  "chat",   "choice",        "database", "glossary",
    "lesson",     "survey", "wiki",   "workshop", "hotpot",      "questionnaire", "teamwork"};

constexpr std::array<std::string_view, 5> kResourceKinds = {"page", "url", "folder", "book",
                                                            "resource"};

const std::vector<std::string> kLogHeader = {"course", "timestamp", "student_id", "action",
                                             "activity_kind"};
const std::vector<std::string> kMarksHeader = {"student_id", "final_mark"};

bool parse_mark(const std::string& text, double& out) {
    const char* begin = text.data();
    const char* end = begin + text.size();
    while (begin != end && (*begin == ' ' || *begin == '\t')) ++begin;
    while (end != begin && (end[-1] == ' ' || end[-1] == '\t')) --end;
    const auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end && std::isfinite(out);
}

std::string format_mark(double mark) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), mark);
    return std::string(buf, res.ptr);
}

// Student and course identifiers are opaque: trim only, preserve case.
std::string trim_copy(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return std::string(s);
}

}  // namespace

bool is_known_activity_kind(std::string_view kind) {
    return std::find(kActivityKinds.begin(), kActivityKinds.end(), kind) != kActivityKinds.end();
}

bool is_resource_kind(std::string_view kind) {
    return std::find(kResourceKinds.begin(), kResourceKinds.end(), kind) != kResourceKinds.end();
}

std::string normalize_action(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    bool pending_space = false;
    for (const char c : raw) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (!out.empty()) pending_space = true;
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
}

CourseLog parse_course_log(std::istream& log_source, std::istream& marks_source,
                           std::string course_code) {
    CourseLog course;
    course.course_code = std::move(course_code);

    CsvReader log_reader(log_source);
    std::vector<std::string> fields;
    if (!log_reader.next(fields) || fields != kLogHeader) {
        throw MalformedRow(1, "log header must be 'course,timestamp,student_id,action,activity_kind'");
    }

    std::size_t foreign_course_rows = 0;
    std::map<std::string, std::size_t> unknown_kinds;
    while (log_reader.next(fields)) {
        if (fields.size() != kLogHeader.size()) {
            throw MalformedRow(log_reader.line(), "expected 5 fields, got " +
                                                      std::to_string(fields.size()));
        }
        LogEvent ev;
        std::string err;
        const auto ts = parse_timestamp(fields[1], &err);
        if (!ts) throw MalformedRow(log_reader.line(), "bad timestamp '" + fields[1] + "': " + err);
        ev.timestamp = *ts;
        ev.student_id = trim_copy(fields[2]);
        if (ev.student_id.empty()) throw MalformedRow(log_reader.line(), "missing student_id");
        ev.action = normalize_action(fields[3]);
        if (ev.action.empty()) throw MalformedRow(log_reader.line(), "missing action");
        ev.activity_kind = normalize_action(fields[4]);
        if (!fields[0].empty() && trim_copy(fields[0]) != course.course_code) {
            ++foreign_course_rows;
        }
        if (!ev.activity_kind.empty() && !is_known_activity_kind(ev.activity_kind) &&
            !is_resource_kind(ev.activity_kind)) {
            ++unknown_kinds[ev.activity_kind];
        }
        course.events.push_back(std::move(ev));
    }
    if (course.events.empty()) throw EmptyLog();

    CsvReader marks_reader(marks_source);
    if (!marks_reader.next(fields) || fields != kMarksHeader) {
        throw MalformedRow(1, "marks header must be 'student_id,final_mark'");
    }
    while (marks_reader.next(fields)) {
        if (fields.size() != kMarksHeader.size()) {
            throw MalformedRow(marks_reader.line(),
                               "expected 2 fields, got " + std::to_string(fields.size()));
        }
        const std::string student = trim_copy(fields[0]);
        if (student.empty()) throw MalformedRow(marks_reader.line(), "missing student_id");
        double mark = 0.0;
        if (!parse_mark(fields[1], mark)) {
            throw MalformedRow(marks_reader.line(), "bad mark '" + fields[1] + "'");
        }
        if (mark < 0.0 || mark > 10.0) {
            throw MalformedRow(marks_reader.line(),
                               "mark " + fields[1] + " outside [0,10]");
        }
        if (!course.marks.emplace(student, mark).second) throw DuplicateMark(student);
    }

    std::stable_sort(course.events.begin(), course.events.end(),
                     [](const LogEvent& a, const LogEvent& b) { return a.timestamp < b.timestamp; });

    if (foreign_course_rows > 0) {
        course.warnings.push_back(std::to_string(foreign_course_rows) +
                                  " event row(s) carry a course code other than '" +
                                  course.course_code + "'");
    }
    for (const auto& [kind, count] : unknown_kinds) {
        course.warnings.push_back("unknown activity kind '" + kind + "' on " +
                                  std::to_string(count) + " event(s); counted as an activity");
    }
    return course;
}

void write_course_log(const CourseLog& course, std::ostream& log_out, std::ostream& marks_out) {
    write_csv_record(log_out, kLogHeader);
    std::vector<std::string> fields(5);
    for (const LogEvent& ev : course.events) {
        fields[0] = course.course_code;
        fields[1] = format_timestamp(ev.timestamp);
        fields[2] = ev.student_id;
        fields[3] = ev.action;
        fields[4] = ev.activity_kind;
        write_csv_record(log_out, fields);
    }
    write_csv_record(marks_out, kMarksHeader);
    fields.resize(2);
    for (const auto& [student, mark] : course.marks) {
        fields[0] = student;
        fields[1] = format_mark(mark);
        write_csv_record(marks_out, fields);
    }
}

std::set<std::string> distinct_activity_types(const CourseLog& course) {
    std::set<std::string> kinds;
    for (const LogEvent& ev : course.events) {
        if (ev.activity_kind.empty()) continue;
        if (is_resource_kind(ev.activity_kind)) continue;
        kinds.insert(ev.activity_kind);
    }
    return kinds;
}

UsageLevel classify_usage_level(std::size_t n) {
    if (n <= 1) return UsageLevel::Low;
    if (n == 2) return UsageLevel::Medium;
    return UsageLevel::High;
}

UsageLevel usage_level(const CourseLog& course) {
    return classify_usage_level(distinct_activity_types(course).size());
}

}  // namespace ontoport
