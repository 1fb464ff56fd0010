#include <doctest.h>

#include <sstream>

#include "ontoport/event_log.hpp"
#include "ontoport/timestamp.hpp"

using namespace ontoport;

namespace {

CourseLog parse(const std::string& log, const std::string& marks, const std::string& code = "T1") {
    std::istringstream log_in(log);
    std::istringstream marks_in(marks);
    return parse_course_log(log_in, marks_in, code);
}

const std::string kHeader = "course,timestamp,student_id,action,activity_kind\n";
const std::string kMarksHeader = "student_id,final_mark\n";

}  // namespace

TEST_CASE("normalize_action lowercases and collapses whitespace") {
    CHECK(normalize_action("Quiz  Attempt") == "quiz attempt");
    CHECK(normalize_action("quiz attempt") == "quiz attempt");
    CHECK(normalize_action("  Forum\tAdd   Post ") == "forum add post");
    CHECK(normalize_action("   ") == "");
}

TEST_CASE("parse_course_log ingests and sorts rows") {
    const auto course = parse(kHeader +
                                  "T1,2024-03-02 10:00:00,s2,Quiz Attempt,quiz\n"
                                  "T1,2024-03-01 09:00:00,s1,course view,\n"
                                  "T1,2024-03-01 12:30:00,s1,Forum  Add Post,forum\n",
                              kMarksHeader + "s1,7.5\ns2,4\n");
    REQUIRE(course.events.size() == 3);
    CHECK(course.events[0].student_id == "s1");
    CHECK(course.events[0].action == "course view");
    CHECK(course.events[1].action == "forum add post");
    CHECK(course.events[2].action == "quiz attempt");
    for (std::size_t i = 0; i + 1 < course.events.size(); ++i) {
        CHECK(course.events[i].timestamp <= course.events[i + 1].timestamp);
    }
    CHECK(course.marks.at("s1") == 7.5);
    CHECK(course.marks.at("s2") == 4.0);
}

TEST_CASE("parse_course_log rejects bad input") {
    const std::string ok_log = kHeader + "T1,2024-03-01 09:00:00,s1,course view,\n";

    SUBCASE("mark outside range") {
        CHECK_THROWS_AS(parse(ok_log, kMarksHeader + "s1,11\n"), MalformedRow);
        CHECK_THROWS_AS(parse(ok_log, kMarksHeader + "s1,-0.5\n"), MalformedRow);
    }
    SUBCASE("duplicate mark") {
        CHECK_THROWS_AS(parse(ok_log, kMarksHeader + "s1,5\ns1,6\n"), DuplicateMark);
    }
    SUBCASE("empty log") {
        CHECK_THROWS_AS(parse(kHeader, kMarksHeader + "s1,5\n"), EmptyLog);
    }
    SUBCASE("unparsable timestamp") {
        CHECK_THROWS_AS(parse(kHeader + "T1,2024-13-01 09:00:00,s1,course view,\n",
                              kMarksHeader + "s1,5\n"),
                        MalformedRow);
        CHECK_THROWS_AS(parse(kHeader + "T1,yesterday,s1,course view,\n", kMarksHeader + "s1,5\n"),
                        MalformedRow);
    }
    SUBCASE("missing fields") {
        CHECK_THROWS_AS(parse(kHeader + "T1,2024-03-01 09:00:00,,course view,\n",
                              kMarksHeader + "s1,5\n"),
                        MalformedRow);
        CHECK_THROWS_AS(parse(kHeader + "T1,2024-03-01 09:00:00,s1, ,\n", kMarksHeader + "s1,5\n"),
                        MalformedRow);
        CHECK_THROWS_AS(parse(kHeader + "T1,2024-03-01 09:00:00,s1\n", kMarksHeader + "s1,5\n"),
                        MalformedRow);
    }
    SUBCASE("wrong header") {
        CHECK_THROWS_AS(parse("time,student,action\n", kMarksHeader), MalformedRow);
    }
}

TEST_CASE("timestamps with offsets fold into UTC") {
    const auto course = parse(kHeader +
                                  "T1,2024-03-01 10:00:00+02:00,s1,course view,\n"
                                  "T1,2024-03-01 08:00:00Z,s1,page view,page\n",
                              kMarksHeader + "s1,5\n");
    CHECK(course.events[0].timestamp == course.events[1].timestamp);
}

TEST_CASE("serialization round-trips to an equal CourseLog") {
    const auto course = parse(kHeader +
                                  "T1,2024-03-02 10:00:00,s2,quiz attempt,quiz\n"
                                  "T1,2024-03-01 09:00:00,\"s1,x\",course view,\n"
                                  "T1,2024-03-01 09:00:00,s1,forum view forum,forum\n",
                              kMarksHeader + "\"s1,x\",7.25\ns1,3.125\ns2,9\n");
    std::ostringstream log_out, marks_out;
    write_course_log(course, log_out, marks_out);
    const auto reparsed = parse(log_out.str(), marks_out.str());
    CHECK(reparsed == course);

    // idempotence: serializing again is byte-identical
    std::ostringstream log2, marks2;
    write_course_log(reparsed, log2, marks2);
    CHECK(log2.str() == log_out.str());
    CHECK(marks2.str() == marks_out.str());
}

TEST_CASE("distinct_activity_types counts activities, not resources") {
    const auto with_kinds = [](const std::string& rows) {
        return parse(kHeader + rows, kMarksHeader + "s1,5\n");
    };
    SUBCASE("set semantics") {
        const auto c = with_kinds(
            "T1,2024-03-01 09:00:00,s1,quiz view,quiz\n"
            "T1,2024-03-01 09:01:00,s1,forum view forum,forum\n"
            "T1,2024-03-01 09:02:00,s1,quiz attempt,quiz\n");
        CHECK(distinct_activity_types(c) == std::set<std::string>{"quiz", "forum"});
    }
    SUBCASE("resource-only kinds yield the empty set") {
        const auto c = with_kinds(
            "T1,2024-03-01 09:00:00,s1,page view,page\n"
            "T1,2024-03-01 09:01:00,s1,url view,url\n");
        CHECK(distinct_activity_types(c).empty());
    }
    SUBCASE("three activity kinds") {
        const auto c = with_kinds(
            "T1,2024-03-01 09:00:00,s1,assignment upload,assignment\n"
            "T1,2024-03-01 09:01:00,s1,forum add post,forum\n"
            "T1,2024-03-01 09:02:00,s1,quiz attempt,quiz\n");
        CHECK(distinct_activity_types(c).size() == 3);
    }
    SUBCASE("unknown kinds count as activities and warn") {
        const auto c = with_kinds("T1,2024-03-01 09:00:00,s1,zoom join,zoomcall\n");
        CHECK(distinct_activity_types(c) == std::set<std::string>{"zoomcall"});
        REQUIRE(!c.warnings.empty());
        CHECK(c.warnings.front().find("zoomcall") != std::string::npos);
    }
}

TEST_CASE("classify_usage_level thresholds") {
    CHECK(classify_usage_level(0) == UsageLevel::Low);
    CHECK(classify_usage_level(1) == UsageLevel::Low);
    CHECK(classify_usage_level(2) == UsageLevel::Medium);
    CHECK(classify_usage_level(3) == UsageLevel::High);
    CHECK(classify_usage_level(7) == UsageLevel::High);

    // monotone non-decreasing
    UsageLevel prev = classify_usage_level(0);
    for (std::size_t n = 1; n <= 10; ++n) {
        const UsageLevel cur = classify_usage_level(n);
        CHECK(static_cast<int>(cur) >= static_cast<int>(prev));
        prev = cur;
    }
}

TEST_CASE("timestamp parse and format agree") {
    const auto t = parse_timestamp("2024-02-29 23:59:59");
    REQUIRE(t.has_value());
    CHECK(format_timestamp(*t) == "2024-02-29 23:59:59");
    CHECK(!parse_timestamp("2023-02-29 00:00:00").has_value());
    CHECK(utc_day(*parse_timestamp("2024-03-01 00:00:00")) ==
          utc_day(*parse_timestamp("2024-03-01 23:59:59")));
    CHECK(utc_day(*parse_timestamp("2024-03-01 23:59:59")) + 1 ==
          utc_day(*parse_timestamp("2024-03-02 00:00:00")));
}
