#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ontoport/dataset.hpp"
#include "ontoport/event_log.hpp"

namespace ontoport {

// The four event categories; the fifth attribute (engagement) is derived from
// interaction totals and active days, not from an action mapping.
enum class EventCategory : std::uint8_t { Learning = 0, Communicating = 1, Working = 2, Evaluating = 3 };

std::string_view to_string(EventCategory c);
std::optional<EventCategory> category_from_string(std::string_view name);

inline constexpr std::array<std::string_view, 5> kAttributeNames = {
    "learning", "communicating", "working", "evaluating", "engagement"};

struct ActionTaxonomy {
    std::map<std::string, EventCategory> mapping;  // normalized action -> category

    std::size_t size() const { return mapping.size(); }
    std::array<std::size_t, 4> category_counts() const;
    std::vector<std::string> actions_of(EventCategory c) const;

    // The default taxonomy shipped with the tool (also available as a data
    // file so alternative ontologies can be swapped in).
    static const ActionTaxonomy& builtin();
    static std::string_view builtin_text();
};

// Taxonomy file: one `action name = CATEGORY` per line, '#' comments,
// categories LEARNING / COMMUNICATING / WORKING / EVALUATING.
ActionTaxonomy load_taxonomy(std::istream& source);
void save_taxonomy(const ActionTaxonomy& taxonomy, std::ostream& out);

// nullopt = unmapped. Unmapped events still count toward the engagement
// interaction total, but not toward the four percentages.
std::optional<EventCategory> map_action(const ActionTaxonomy& taxonomy, const std::string& action);

Outcome label_outcome(double mark);  // mark >= 5 -> Pass; throws OutOfRangeMark

struct StudentFeatures {
    std::string student_id;
    double learning_pct = 0.0;
    double communicating_pct = 0.0;
    double working_pct = 0.0;
    double evaluating_pct = 0.0;
    double engagement = 0.0;
    Outcome outcome = Outcome::Fail;
};

struct FeatureDataset {
    std::string course_code;
    std::vector<StudentFeatures> rows;  // one per graded student, ordered by id
    std::vector<std::string> warnings;

    DataTable to_table() const;
};

// One row per graded student. Percentages are per-student compositions of
// taxonomy-mapped events; engagement is the equal-weight mean of the
// course-max-normalized interaction count and distinct active UTC days,
// scaled to [0,100]. Throws NoGradedStudents.
FeatureDataset build_features(const CourseLog& course, const ActionTaxonomy& taxonomy);

// Low-level variant: one percentage attribute per taxonomy action (columns in
// lexicographic action order), same denominator and labels. Used for the
// no-ontology comparison; no engagement column.
DataTable build_raw_features(const CourseLog& course, const ActionTaxonomy& taxonomy);

}  // namespace ontoport
