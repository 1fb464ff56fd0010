#include "ontoport/synth.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <sstream>

#include "ontoport/rng.hpp"
#include "ontoport/timestamp.hpp"

namespace ontoport {

namespace {

std::string trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return std::string(s);
}

double parse_double(const std::string& v, const std::string& key) {
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size()) {
        throw InvalidSpec("bad numeric value '" + v + "' for " + key);
    }
    return out;
}

long long parse_int(const std::string& v, const std::string& key) {
    long long out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size()) {
        throw InvalidSpec("bad integer value '" + v + "' for " + key);
    }
    return out;
}

std::size_t category_index(std::string_view name) {
    for (std::size_t i = 0; i < 4; ++i) {
        if (name == kAttributeNames[i]) return i;
    }
    throw InvalidSpec("unknown category '" + std::string(name) + "'");
}

IntensityProfile parse_profile_line(const std::string& value) {
    std::istringstream in(value);
    std::string outcome_text;
    double weight = 0.0;
    if (!(in >> outcome_text >> weight)) {
        throw InvalidSpec("profile needs '<outcome> <weight> <category>=<mean>...'");
    }
    IntensityProfile p;
    if (outcome_text == "pass") p.outcome = Outcome::Pass;
    else if (outcome_text == "fail") p.outcome = Outcome::Fail;
    else throw InvalidSpec("profile outcome must be 'pass' or 'fail'");
    p.weight = weight;
    std::string token;
    while (in >> token) {
        if (!token.empty() && token.back() == ',') token.pop_back();
        const std::size_t eq = token.find('=');
        if (eq == std::string::npos) throw InvalidSpec("bad profile token '" + token + "'");
        p.category_means[category_index(token.substr(0, eq))] =
            parse_double(token.substr(eq + 1), "profile");
    }
    return p;
}

}  // namespace

CourseSpec parse_course_spec(std::istream& in) {
    CourseSpec spec;
    std::array<IntensityProfile, 2> base;  // [0]=fail, [1]=pass
    base[0].outcome = Outcome::Fail;
    base[1].outcome = Outcome::Pass;
    std::array<bool, 2> base_used{};
    bool profiles_used = false;

    std::string line;
    while (std::getline(in, line)) {
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        if (trim(line).empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) throw InvalidSpec("expected 'key = value': " + trim(line));
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (key == "course_code") spec.course_code = value;
        else if (key == "n_students") spec.n_students = static_cast<int>(parse_int(value, key));
        else if (key == "pass_rate") spec.pass_rate = parse_double(value, key);
        else if (key == "days_min") spec.days_min = static_cast<int>(parse_int(value, key));
        else if (key == "days_max") spec.days_max = static_cast<int>(parse_int(value, key));
        else if (key == "noise") spec.noise = parse_double(value, key);
        else if (key == "action_focus") spec.action_focus = parse_double(value, key);
        else if (key == "seed") spec.seed = static_cast<std::uint64_t>(parse_int(value, key));
        else if (key == "activity_kinds") {
            std::istringstream kinds(value);
            std::string kind;
            while (std::getline(kinds, kind, ',')) {
                const std::string k = normalize_action(kind);
                if (!k.empty()) spec.activity_kinds.push_back(k);
            }
        } else if (key == "profile") {
            spec.profiles.push_back(parse_profile_line(value));
            profiles_used = true;
        } else if (key.starts_with("pass.") || key.starts_with("fail.")) {
            const bool is_pass = key.starts_with("pass.");
            base[is_pass ? 1 : 0].category_means[category_index(key.substr(5))] =
                parse_double(value, key);
            base_used[is_pass ? 1 : 0] = true;
        } else {
            throw InvalidSpec("unknown key '" + key + "'");
        }
    }
    if (profiles_used && (base_used[0] || base_used[1])) {
        throw InvalidSpec("use either pass./fail. intensities or profile lines, not both");
    }
    if (!profiles_used) {
        spec.profiles.push_back(base[1]);
        spec.profiles.push_back(base[0]);
    }
    return spec;
}

namespace {

void validate(const CourseSpec& spec) {
    if (spec.course_code.empty()) throw InvalidSpec("course_code is required");
    if (spec.n_students < 1) throw InvalidSpec("n_students must be positive");
    if (!(spec.pass_rate > 0.0 && spec.pass_rate < 1.0)) {
        throw InvalidSpec("pass_rate must lie strictly between 0 and 1");
    }
    if (spec.days_min < 1 || spec.days_min > spec.days_max) {
        throw InvalidSpec("need 1 <= days_min <= days_max");
    }
    if (spec.noise < 0.0) throw InvalidSpec("noise must be non-negative");
    if (spec.action_focus < 0.0 || spec.action_focus > 1.0) {
        throw InvalidSpec("action_focus must lie in [0,1]");
    }
    for (const Outcome o : {Outcome::Pass, Outcome::Fail}) {
        bool any_profile = false;
        bool any_positive = false;
        for (const IntensityProfile& p : spec.profiles) {
            if (p.outcome != o) continue;
            any_profile = true;
            if (p.weight <= 0.0) throw InvalidSpec("profile weights must be positive");
            for (const double m : p.category_means) {
                if (m < 0.0) throw InvalidSpec("category means must be non-negative");
                if (m > 0.0) any_positive = true;
            }
        }
        if (!any_profile) {
            throw InvalidSpec(std::string("no intensity profile for outcome ") +
                              std::string(to_string(o)));
        }
        if (!any_positive) {
            throw InvalidSpec(std::string("outcome ") + std::string(to_string(o)) +
                              " needs at least one positive category intensity");
        }
    }
}

std::string module_of(const std::string& action) {
    const std::size_t space = action.find(' ');
    return space == std::string::npos ? action : action.substr(0, space);
}

std::string kind_of(const std::string& action) {
    const std::string module = module_of(action);
    if (is_known_activity_kind(module) || is_resource_kind(module)) return module;
    return {};  // course/blog/imscp rows carry no activity kind
}

// Actions of one category the course may draw from: module must be one of
// the requested activity kinds, or a resource/no-kind module (those never
// affect the usage level). Falls back to the whole category when the
// restriction empties it.
std::vector<std::string> allowed_actions(const ActionTaxonomy& taxonomy, EventCategory cat,
                                         const std::vector<std::string>& requested_kinds,
                                         bool& fell_back) {
    const std::vector<std::string> all = taxonomy.actions_of(cat);
    std::vector<std::string> filtered;
    for (const std::string& action : all) {
        const std::string module = module_of(action);
        const bool is_activity = is_known_activity_kind(module);
        const bool requested = std::find(requested_kinds.begin(), requested_kinds.end(), module) !=
                               requested_kinds.end();
        if (!is_activity || requested) filtered.push_back(action);
    }
    if (filtered.empty()) {
        fell_back = true;
        return all;
    }
    return filtered;
}

// Largest-remainder allocation of `total` slots across weights.
std::vector<std::size_t> quota(const std::vector<double>& weights, std::size_t total) {
    const double weight_sum = [&] {
        double s = 0.0;
        for (const double w : weights) s += w;
        return s;
    }();
    std::vector<std::size_t> counts(weights.size(), 0);
    std::vector<std::pair<double, std::size_t>> remainders;
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const double exact = static_cast<double>(total) * weights[i] / weight_sum;
        counts[i] = static_cast<std::size_t>(exact);
        assigned += counts[i];
        remainders.emplace_back(exact - std::floor(exact), i);
    }
    std::sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    for (std::size_t k = 0; assigned < total; ++k, ++assigned) {
        ++counts[remainders[k % remainders.size()].second];
    }
    return counts;
}

}  // namespace

CourseLog generate_course(const CourseSpec& spec) {
    validate(spec);
    const ActionTaxonomy& taxonomy = ActionTaxonomy::builtin();
    Rng rng(spec.seed);

    CourseLog course;
    course.course_code = spec.course_code;

    // action pools and the course's preferred action per category
    std::array<std::vector<std::string>, 4> pools;
    std::array<std::size_t, 4> preferred{};
    for (std::size_t c = 0; c < 4; ++c) {
        bool fell_back = false;
        pools[c] = allowed_actions(taxonomy, static_cast<EventCategory>(c), spec.activity_kinds,
                                   fell_back);
        preferred[c] = static_cast<std::size_t>(rng.next_below(pools[c].size()));
        bool category_used = false;
        for (const IntensityProfile& p : spec.profiles) {
            if (p.category_means[c] > 0.0) category_used = true;
        }
        if (fell_back && category_used) {
            course.warnings.push_back("activity_kinds restriction leaves no " +
                                      std::string(to_string(static_cast<EventCategory>(c))) +
                                      " actions; drawing from the full category");
        }
    }

    // outcomes: exact quota, then shuffled
    const std::size_t n = static_cast<std::size_t>(spec.n_students);
    const std::size_t n_pass = static_cast<std::size_t>(
        std::llround(static_cast<double>(n) * spec.pass_rate));
    std::vector<Outcome> outcome_of(n, Outcome::Fail);
    for (std::size_t i = 0; i < n_pass && i < n; ++i) outcome_of[i] = Outcome::Pass;
    rng.shuffle(outcome_of);

    // per-outcome profile assignment, largest-remainder over profile weights
    std::array<std::vector<std::size_t>, 2> students_of_outcome;
    for (std::size_t s = 0; s < n; ++s) {
        students_of_outcome[outcome_of[s] == Outcome::Pass ? 1 : 0].push_back(s);
    }
    std::vector<std::size_t> profile_of(n, 0);
    for (const std::size_t oc : {std::size_t{0}, std::size_t{1}}) {
        const Outcome o = oc == 1 ? Outcome::Pass : Outcome::Fail;
        std::vector<std::size_t> profile_ids;
        std::vector<double> weights;
        for (std::size_t p = 0; p < spec.profiles.size(); ++p) {
            if (spec.profiles[p].outcome == o) {
                profile_ids.push_back(p);
                weights.push_back(spec.profiles[p].weight);
            }
        }
        const std::vector<std::size_t> counts = quota(weights, students_of_outcome[oc].size());
        std::size_t cursor = 0;
        for (std::size_t k = 0; k < profile_ids.size(); ++k) {
            for (std::size_t c = 0; c < counts[k]; ++c) {
                profile_of[students_of_outcome[oc][cursor++]] = profile_ids[k];
            }
        }
    }

    const std::int64_t base_day = days_from_civil(2024, 1, 8);
    const int id_width = static_cast<int>(std::to_string(n).size());
    const std::int64_t day_window =
        std::max<std::int64_t>(2LL * spec.days_max, 14);

    for (std::size_t s = 0; s < n; ++s) {
        char id_buf[32];
        std::snprintf(id_buf, sizeof(id_buf), "s%0*zu", id_width, s + 1);
        const std::string student_id = id_buf;
        const Outcome outcome = outcome_of[s];

        const double u = rng.next_unit();
        course.marks[student_id] = outcome == Outcome::Pass ? 5.0 + 5.0 * u : 5.0 * u;

        const int days = spec.days_min +
                         static_cast<int>(rng.next_below(
                             static_cast<std::uint64_t>(spec.days_max - spec.days_min + 1)));
        // distinct day offsets via partial Fisher-Yates over the term window
        std::vector<std::int64_t> window(static_cast<std::size_t>(day_window));
        for (std::size_t i = 0; i < window.size(); ++i) window[i] = static_cast<std::int64_t>(i);
        std::vector<std::int64_t> day_offsets;
        for (int d = 0; d < days; ++d) {
            const std::size_t pick =
                static_cast<std::size_t>(d) +
                static_cast<std::size_t>(rng.next_below(window.size() - static_cast<std::size_t>(d)));
            std::swap(window[static_cast<std::size_t>(d)], window[pick]);
            day_offsets.push_back(window[static_cast<std::size_t>(d)]);
        }

        const IntensityProfile& profile = spec.profiles[profile_of[s]];
        std::size_t event_index = 0;
        for (std::size_t c = 0; c < 4; ++c) {
            const double mean = profile.category_means[c];
            long long count = spec.noise > 0.0
                                  ? std::llround(mean + spec.noise * rng.next_gaussian())
                                  : std::llround(mean);
            count = std::max(count, 0LL);
            for (long long e = 0; e < count; ++e, ++event_index) {
                const std::vector<std::string>& pool = pools[c];
                std::size_t pick = preferred[c];
                if (spec.action_focus <= 0.0 || rng.next_unit() >= spec.action_focus) {
                    pick = static_cast<std::size_t>(rng.next_below(pool.size()));
                }
                // the first `days` events cover each drawn day once
                const std::int64_t day_offset =
                    event_index < day_offsets.size()
                        ? day_offsets[event_index]
                        : day_offsets[static_cast<std::size_t>(rng.next_below(day_offsets.size()))];
                LogEvent ev;
                ev.timestamp = (base_day + day_offset) * 86400 +
                               static_cast<std::int64_t>(rng.next_below(86400));
                ev.student_id = student_id;
                ev.action = pool[pick];
                ev.activity_kind = kind_of(pool[pick]);
                course.events.push_back(std::move(ev));
            }
        }
    }

    std::stable_sort(course.events.begin(), course.events.end(),
                     [](const LogEvent& a, const LogEvent& b) { return a.timestamp < b.timestamp; });
    return course;
}

}  // namespace ontoport
