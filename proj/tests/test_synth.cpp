#include <doctest.h>

#include <functional>
#include <sstream>

#include "ontoport/synth.hpp"
#include "ontoport/transfer.hpp"

using namespace ontoport;

namespace {

CourseSpec basic_spec() {
    CourseSpec spec;
    spec.course_code = "SYN";
    spec.n_students = 30;
    spec.pass_rate = 0.5;
    spec.activity_kinds = {"quiz", "forum", "assignment"};
    spec.days_min = 2;
    spec.days_max = 5;
    spec.noise = 0.0;
    spec.seed = 99;
    spec.profiles = {{Outcome::Pass, 1.0, {4, 20, 4, 4}}, {Outcome::Fail, 1.0, {4, 2, 4, 4}}};
    return spec;
}

std::size_t hash_course(const CourseLog& c) {
    std::size_t h = 0;
    for (const LogEvent& ev : c.events) {
        h ^= std::hash<std::string>{}(ev.student_id + '|' + ev.action + '|' + ev.activity_kind) +
             std::hash<std::int64_t>{}(ev.timestamp) + (h << 6) + (h >> 2);
    }
    return h;
}

}  // namespace

TEST_CASE("generate_course is deterministic under the seed") {
    const CourseSpec spec = basic_spec();
    const CourseLog a = generate_course(spec);
    const CourseLog b = generate_course(spec);
    CHECK(a == b);

    CourseSpec other = spec;
    other.seed = 100;
    const CourseLog c = generate_course(other);
    CHECK(hash_course(a) != hash_course(c));
}

TEST_CASE("generated marks agree with the outcome labels") {
    const CourseLog course = generate_course(basic_spec());
    const auto features = build_features(course, ActionTaxonomy::builtin());
    int pass = 0, fail = 0;
    for (const StudentFeatures& f : features.rows) {
        const double mark = course.marks.at(f.student_id);
        CHECK(label_outcome(mark) == f.outcome);
        (f.outcome == Outcome::Pass ? pass : fail)++;
    }
    CHECK(pass == 15);
    CHECK(fail == 15);
}

TEST_CASE("disjoint communicating intensities separate the classes") {
    const CourseLog course = generate_course(basic_spec());
    const auto features = build_features(course, ActionTaxonomy::builtin());
    double min_pass = 101.0, max_fail = -1.0;
    for (const StudentFeatures& f : features.rows) {
        if (f.outcome == Outcome::Pass) min_pass = std::min(min_pass, f.communicating_pct);
        else max_fail = std::max(max_fail, f.communicating_pct);
    }
    CHECK(min_pass > max_fail);
}

TEST_CASE("noise-zero separable spec induces a one-split tree") {
    CourseSpec spec = basic_spec();
    spec.profiles = {{Outcome::Pass, 1.0, {0, 20, 0, 0}}, {Outcome::Fail, 1.0, {0, 0.4, 0, 0}}};
    spec.activity_kinds = {"forum"};
    spec.days_min = 5;
    spec.days_max = 5;
    const CourseLog course = generate_course(spec);
    const PreparedCourse p = prepare_course(course, ActionTaxonomy::builtin(), false);
    const DecisionTree tree = train(p.discretized_table, {});
    CHECK(tree.size() <= 3);
}

TEST_CASE("activity kinds control the usage level") {
    const CourseLog course = generate_course(basic_spec());
    CHECK(distinct_activity_types(course) ==
          std::set<std::string>{"quiz", "forum", "assignment"});
    CHECK(usage_level(course) == UsageLevel::High);
}

TEST_CASE("events cover the drawn day counts") {
    CourseSpec spec = basic_spec();
    spec.days_min = 3;
    spec.days_max = 3;
    const CourseLog course = generate_course(spec);
    const auto features = build_features(course, ActionTaxonomy::builtin());
    for (const StudentFeatures& f : features.rows) {
        CHECK(f.engagement >= 0.0);
        CHECK(f.engagement <= 100.0);
    }
}

TEST_CASE("invalid specs are rejected") {
    CourseSpec spec = basic_spec();
    SUBCASE("pass_rate bounds are open") {
        spec.pass_rate = 0.0;
        CHECK_THROWS_AS(generate_course(spec), InvalidSpec);
        spec.pass_rate = 1.0;
        CHECK_THROWS_AS(generate_course(spec), InvalidSpec);
    }
    SUBCASE("days range") {
        spec.days_min = 4;
        spec.days_max = 2;
        CHECK_THROWS_AS(generate_course(spec), InvalidSpec);
    }
    SUBCASE("all-zero intensities") {
        spec.profiles[1].category_means = {0, 0, 0, 0};
        CHECK_THROWS_AS(generate_course(spec), InvalidSpec);
    }
    SUBCASE("negative noise") {
        spec.noise = -1.0;
        CHECK_THROWS_AS(generate_course(spec), InvalidSpec);
    }
    SUBCASE("missing outcome profile") {
        spec.profiles.pop_back();
        CHECK_THROWS_AS(generate_course(spec), InvalidSpec);
    }
}

TEST_CASE("spec files parse") {
    const std::string text = R"(# demo spec
course_code = DEMO
n_students = 12
pass_rate = 0.5
activity_kinds = quiz, forum
days_min = 2
days_max = 4
noise = 0.5
seed = 31
action_focus = 0.25
pass.learning = 3
pass.communicating = 9
fail.learning = 5
fail.communicating = 1
)";
    std::istringstream in(text);
    const CourseSpec spec = parse_course_spec(in);
    CHECK(spec.course_code == "DEMO");
    CHECK(spec.n_students == 12);
    CHECK(spec.activity_kinds == std::vector<std::string>{"quiz", "forum"});
    CHECK(spec.action_focus == 0.25);
    REQUIRE(spec.profiles.size() == 2);
    CHECK(spec.profiles[0].outcome == Outcome::Pass);
    CHECK(spec.profiles[0].category_means[1] == 9.0);
    CHECK(spec.profiles[1].category_means[0] == 5.0);

    const CourseLog course = generate_course(spec);
    CHECK(course.marks.size() == 12);
}

TEST_CASE("profile lines define weighted archetypes") {
    const std::string text = R"(course_code = MIX
n_students = 20
pass_rate = 0.5
days_min = 2
days_max = 2
seed = 8
profile = pass 3 learning=12, communicating=2
profile = pass 1 learning=2, communicating=12
profile = fail 1 learning=2, communicating=2
)";
    std::istringstream in(text);
    const CourseSpec spec = parse_course_spec(in);
    REQUIRE(spec.profiles.size() == 3);
    CHECK(spec.profiles[0].weight == 3.0);
    const CourseLog course = generate_course(spec);
    const auto features = build_features(course, ActionTaxonomy::builtin());
    // 3:1 split of the ten passing students
    int learning_heavy = 0;
    for (const StudentFeatures& f : features.rows) {
        if (f.outcome == Outcome::Pass && f.learning_pct > 50.0) ++learning_heavy;
    }
    CHECK(learning_heavy == 8);  // quota of 10 over weights 3:1 -> 8 head-heavy
}

TEST_CASE("synthetic output round-trips through the parser") {
    const CourseLog course = generate_course(basic_spec());
    std::ostringstream log_out, marks_out;
    write_course_log(course, log_out, marks_out);
    std::istringstream log_in(log_out.str()), marks_in(marks_out.str());
    const CourseLog reparsed = parse_course_log(log_in, marks_in, course.course_code);
    CHECK(reparsed == course);
}
