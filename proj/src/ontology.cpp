#include "ontoport/ontology.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "ontoport/timestamp.hpp"

namespace ontoport {

std::string_view to_string(EventCategory c) {
    switch (c) {
        case EventCategory::Learning: return "LEARNING";
        case EventCategory::Communicating: return "COMMUNICATING";
        case EventCategory::Working: return "WORKING";
        default: return "EVALUATING";
    }
}

std::optional<EventCategory> category_from_string(std::string_view name) {
    if (name == "LEARNING") return EventCategory::Learning;
    if (name == "COMMUNICATING") return EventCategory::Communicating;
    if (name == "WORKING") return EventCategory::Working;
    if (name == "EVALUATING") return EventCategory::Evaluating;
    return std::nullopt;
}

std::array<std::size_t, 4> ActionTaxonomy::category_counts() const {
    std::array<std::size_t, 4> counts{};
    for (const auto& [action, cat] : mapping) ++counts[static_cast<std::size_t>(cat)];
    return counts;
}

std::vector<std::string> ActionTaxonomy::actions_of(EventCategory c) const {
    std::vector<std::string> out;
    for (const auto& [action, cat] : mapping) {
        if (cat == c) out.push_back(action);
    }
    return out;
}

ActionTaxonomy load_taxonomy(std::istream& source) {
    ActionTaxonomy taxonomy;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(source, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            if (!normalize_action(line).empty()) {
                throw MalformedRow(line_no, "expected '<action> = <CATEGORY>'");
            }
            continue;
        }
        const std::string action = normalize_action(line.substr(0, eq));
        std::string cat_text = line.substr(eq + 1);
        // category names are uppercase; normalize spacing only
        std::string cat_name;
        for (const char c : normalize_action(cat_text)) {
            cat_name.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
        }
        if (action.empty()) throw MalformedRow(line_no, "missing action name");
        const auto cat = category_from_string(cat_name);
        if (!cat) throw UnknownCategory(cat_name);
        if (!taxonomy.mapping.emplace(action, *cat).second) throw DuplicateAction(action);
    }
    if (taxonomy.mapping.empty()) throw EmptyTaxonomy();
    return taxonomy;
}

void save_taxonomy(const ActionTaxonomy& taxonomy, std::ostream& out) {
    for (const auto& [action, cat] : taxonomy.mapping) {
        out << action << " = " << to_string(cat) << '\n';
    }
}

std::optional<EventCategory> map_action(const ActionTaxonomy& taxonomy, const std::string& action) {
    const auto it = taxonomy.mapping.find(action);
    if (it == taxonomy.mapping.end()) return std::nullopt;
    return it->second;
}

Outcome label_outcome(double mark) {
    if (!(mark >= 0.0 && mark <= 10.0)) throw OutOfRangeMark(mark);
    return mark >= 5.0 ? Outcome::Pass : Outcome::Fail;
}

namespace {

struct Tally {
    std::array<std::int64_t, 4> category_counts{};
    std::int64_t total_interactions = 0;  // includes unmapped events
    std::set<std::int64_t> active_days;
};

// Shared per-student accumulation; `dropped` collects students with events
// but no mark.
std::map<std::string, Tally> tally_course(const CourseLog& course, const ActionTaxonomy& taxonomy,
                                          std::size_t& dropped_students) {
    std::map<std::string, Tally> tallies;
    std::set<std::string> ungraded;
    for (const LogEvent& ev : course.events) {
        if (!course.marks.contains(ev.student_id)) {
            ungraded.insert(ev.student_id);
            continue;
        }
        Tally& t = tallies[ev.student_id];
        ++t.total_interactions;
        t.active_days.insert(utc_day(ev.timestamp));
        if (const auto cat = map_action(taxonomy, ev.action)) {
            ++t.category_counts[static_cast<std::size_t>(*cat)];
        }
    }
    // graded students without events still get a (zeroed) row
    for (const auto& [student, mark] : course.marks) tallies.try_emplace(student);
    dropped_students = ungraded.size();
    return tallies;
}

}  // namespace

FeatureDataset build_features(const CourseLog& course, const ActionTaxonomy& taxonomy) {
    if (course.marks.empty()) throw NoGradedStudents(course.course_code);

    FeatureDataset ds;
    ds.course_code = course.course_code;

    std::size_t dropped = 0;
    const auto tallies = tally_course(course, taxonomy, dropped);
    if (dropped > 0) {
        ds.warnings.push_back(std::to_string(dropped) +
                              " student(s) with events but no mark dropped");
    }

    std::int64_t max_interactions = 0;
    std::int64_t max_days = 0;
    for (const auto& [student, t] : tallies) {
        max_interactions = std::max(max_interactions, t.total_interactions);
        max_days = std::max<std::int64_t>(max_days, static_cast<std::int64_t>(t.active_days.size()));
    }

    for (const auto& [student, t] : tallies) {
        StudentFeatures f;
        f.student_id = student;
        const std::int64_t mapped =
            t.category_counts[0] + t.category_counts[1] + t.category_counts[2] + t.category_counts[3];
        if (mapped > 0) {
            f.learning_pct = 100.0 * static_cast<double>(t.category_counts[0]) / static_cast<double>(mapped);
            f.communicating_pct = 100.0 * static_cast<double>(t.category_counts[1]) / static_cast<double>(mapped);
            f.working_pct = 100.0 * static_cast<double>(t.category_counts[2]) / static_cast<double>(mapped);
            f.evaluating_pct = 100.0 * static_cast<double>(t.category_counts[3]) / static_cast<double>(mapped);
        }
        const double interaction_ratio =
            max_interactions > 0 ? static_cast<double>(t.total_interactions) / static_cast<double>(max_interactions) : 0.0;
        const double day_ratio =
            max_days > 0 ? static_cast<double>(t.active_days.size()) / static_cast<double>(max_days) : 0.0;
        f.engagement = 50.0 * (interaction_ratio + day_ratio);
        f.outcome = label_outcome(course.marks.at(student));
        ds.rows.push_back(std::move(f));
    }
    return ds;
}

DataTable FeatureDataset::to_table() const {
    DataTable t;
    t.course_code = course_code;
    t.repr = Representation::Numeric;
    t.attribute_names.assign(kAttributeNames.begin(), kAttributeNames.end());
    t.numeric.assign(kAttributeNames.size(), {});
    for (const StudentFeatures& f : rows) {
        t.student_ids.push_back(f.student_id);
        t.outcomes.push_back(f.outcome);
        t.numeric[0].push_back(f.learning_pct);
        t.numeric[1].push_back(f.communicating_pct);
        t.numeric[2].push_back(f.working_pct);
        t.numeric[3].push_back(f.evaluating_pct);
        t.numeric[4].push_back(f.engagement);
    }
    return t;
}

DataTable build_raw_features(const CourseLog& course, const ActionTaxonomy& taxonomy) {
    if (course.marks.empty()) throw NoGradedStudents(course.course_code);

    DataTable t;
    t.course_code = course.course_code;
    t.repr = Representation::Numeric;
    std::map<std::string, std::size_t> column_of;
    for (const auto& [action, cat] : taxonomy.mapping) {
        column_of.emplace(action, t.attribute_names.size());
        t.attribute_names.push_back(action);
    }
    t.numeric.assign(t.attribute_names.size(), {});

    std::map<std::string, std::vector<std::int64_t>> counts;
    for (const LogEvent& ev : course.events) {
        if (!course.marks.contains(ev.student_id)) continue;
        const auto col = column_of.find(ev.action);
        if (col == column_of.end()) continue;
        auto [it, inserted] =
            counts.try_emplace(ev.student_id, std::vector<std::int64_t>(t.attribute_names.size(), 0));
        ++it->second[col->second];
    }
    for (const auto& [student, mark] : course.marks) {
        counts.try_emplace(student, std::vector<std::int64_t>(t.attribute_names.size(), 0));
    }

    for (const auto& [student, row_counts] : counts) {
        std::int64_t total = 0;
        for (const std::int64_t c : row_counts) total += c;
        t.student_ids.push_back(student);
        t.outcomes.push_back(label_outcome(course.marks.at(student)));
        for (std::size_t a = 0; a < row_counts.size(); ++a) {
            const double pct =
                total > 0 ? 100.0 * static_cast<double>(row_counts[a]) / static_cast<double>(total) : 0.0;
            t.numeric[a].push_back(pct);
        }
    }
    return t;
}

}  // namespace ontoport
