#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ontoport/event_log.hpp"
#include "ontoport/ontology.hpp"

namespace ontoport {

// One behavior archetype: mean event counts per category for students of one
// outcome. A spec usually has one profile per outcome; several weighted
// profiles per outcome model mixed populations (nested tree concepts).
struct IntensityProfile {
    Outcome outcome = Outcome::Pass;
    double weight = 1.0;
    std::array<double, 4> category_means{};  // learning, communicating, working, evaluating
};

struct CourseSpec {
    std::string course_code;
    int n_students = 0;
    double pass_rate = 0.5;                    // in (0,1)
    std::vector<std::string> activity_kinds;   // restricts which modules actions are drawn from
    std::vector<IntensityProfile> profiles;    // at least one per outcome
    int days_min = 1;
    int days_max = 1;
    double noise = 0.0;        // std dev of the per-count Gaussian jitter
    double action_focus = 0.0; // 0 = uniform within category; towards 1 = one
                               // course-preferred action per category dominates
    std::uint64_t seed = 0;
};

// Key-value text format, '#' comments. Base intensities via `pass.<category>`
// / `fail.<category>` keys, or weighted `profile = <outcome> <weight>
// learning=<v> communicating=<v> working=<v> evaluating=<v>` lines.
CourseSpec parse_course_spec(std::istream& in);

// Fully seeded generator; marks agree with the Pass/Fail label rule by
// construction. Draws actions from the built-in taxonomy. Throws InvalidSpec.
CourseLog generate_course(const CourseSpec& spec);

}  // namespace ontoport
