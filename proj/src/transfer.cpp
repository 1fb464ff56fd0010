#include "ontoport/transfer.hpp"

#include <algorithm>
#include <map>

#include "ontoport/rng.hpp"

namespace ontoport {

std::string_view to_string(FeatureMode m) {
    return m == FeatureMode::Ontology ? "ontology" : "raw";
}

DataTable balance(const DataTable& table, std::uint64_t seed) {
    std::vector<std::size_t> pass_rows, fail_rows;
    for (std::size_t r = 0; r < table.n_rows(); ++r) {
        (table.outcomes[r] == Outcome::Pass ? pass_rows : fail_rows).push_back(r);
    }
    if (pass_rows.empty() || fail_rows.empty()) {
        throw SingleClassDataset("cannot balance course '" + table.course_code + "'");
    }

    Rng rng(seed);
    auto& majority = pass_rows.size() >= fail_rows.size() ? pass_rows : fail_rows;
    auto& minority = pass_rows.size() >= fail_rows.size() ? fail_rows : pass_rows;
    rng.shuffle(majority);
    majority.resize(minority.size());

    std::vector<std::size_t> keep;
    keep.reserve(2 * minority.size());
    keep.insert(keep.end(), minority.begin(), minority.end());
    keep.insert(keep.end(), majority.begin(), majority.end());
    rng.shuffle(keep);
    return table.select_rows(keep);
}

std::optional<AucPairCounts> auc_pair_counts(std::span<const std::pair<double, Outcome>> scored) {
    AucPairCounts counts;
    std::vector<double> pass_scores, fail_scores;
    for (const auto& [score, outcome] : scored) {
        (outcome == Outcome::Pass ? pass_scores : fail_scores).push_back(score);
    }
    counts.positives = static_cast<std::int64_t>(pass_scores.size());
    counts.negatives = static_cast<std::int64_t>(fail_scores.size());
    if (counts.positives == 0 || counts.negatives == 0) return std::nullopt;
    for (const double p : pass_scores) {
        for (const double n : fail_scores) {
            if (p > n) ++counts.higher;
            else if (p == n) ++counts.equal;
        }
    }
    return counts;
}

std::optional<double> auc(std::span<const std::pair<double, Outcome>> scored) {
    const auto counts = auc_pair_counts(scored);
    if (!counts) return std::nullopt;
    return counts->value();
}

namespace {

std::optional<double> mean_of_defined(std::span<const std::optional<double>> values) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& v : values) {
        if (v) {
            sum += *v;
            ++n;
        }
    }
    if (n == 0) return std::nullopt;
    return sum / static_cast<double>(n);
}

}  // namespace

std::optional<double> EvalMatrices::mean_off_diagonal_loss() const {
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < courses.size(); ++i) {
        for (std::size_t j = 0; j < courses.size(); ++j) {
            if (i == j) continue;
            if (loss_cells[i][j]) {
                sum += *loss_cells[i][j];
                ++n;
            }
        }
    }
    if (n == 0) return std::nullopt;
    return sum / static_cast<double>(n);
}

EvalMatrices matrices_from_auc(std::vector<std::string> courses,
                               std::vector<std::vector<std::optional<double>>> auc_cells) {
    EvalMatrices m;
    m.courses = std::move(courses);
    m.auc_cells = std::move(auc_cells);
    const std::size_t n = m.courses.size();

    m.loss_cells.assign(n, std::vector<std::optional<double>>(n));
    for (std::size_t i = 0; i < n; ++i) {
        const std::optional<double> reference = m.auc_cells[i][i];
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            if (reference && m.auc_cells[i][j]) {
                m.loss_cells[i][j] = *reference - *m.auc_cells[i][j];
            }
        }
    }

    m.auc_row_avg.resize(n);
    m.loss_row_avg.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        m.auc_row_avg[i] = mean_of_defined(m.auc_cells[i]);
        std::vector<std::optional<double>> off_diag;
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j) off_diag.push_back(m.loss_cells[i][j]);
        }
        m.loss_row_avg[i] = mean_of_defined(off_diag);
        for (std::size_t j = 0; j < n; ++j) {
            if (!m.auc_cells[i][j]) ++m.undefined_auc_cells;
        }
    }
    m.auc_grand_mean = mean_of_defined(m.auc_row_avg);
    m.loss_grand_mean = mean_of_defined(m.loss_row_avg);
    return m;
}

GroupEvaluation evaluate_transfer(std::span<const DataTable> course_tables,
                                  const TrainConfig& config, std::uint64_t balance_seed) {
    const std::size_t n = course_tables.size();
    std::vector<std::string> courses;
    courses.reserve(n);
    for (const DataTable& t : course_tables) courses.push_back(t.course_code);

    GroupEvaluation result;
    result.models.resize(n);
    std::vector<DataTable> balanced(n);
    std::vector<std::string> notes;

    for (std::size_t i = 0; i < n; ++i) {
        try {
            balanced[i] = balance(course_tables[i], mix_seed(balance_seed, courses[i]));
            result.models[i] = train(balanced[i], config);
        } catch (const DataError& e) {
            result.models[i].reset();
            notes.push_back("model '" + courses[i] + "' not trained: " + e.what());
        }
    }

    std::vector<std::vector<std::optional<double>>> cells(
        n, std::vector<std::optional<double>>(n));
    for (std::size_t i = 0; i < n; ++i) {
        if (!result.models[i]) continue;
        const DecisionTree& model = *result.models[i];
        for (std::size_t j = 0; j < n; ++j) {
            // diagonal: resubstitution on the balanced training set;
            // off-diagonal: the target course's full unbalanced dataset
            const DataTable& test = (i == j) ? balanced[i] : course_tables[j];
            std::vector<std::pair<double, Outcome>> scored;
            scored.reserve(test.n_rows());
            for (std::size_t r = 0; r < test.n_rows(); ++r) {
                scored.emplace_back(predict(model, test, r).score, test.outcomes[r]);
            }
            cells[i][j] = auc(scored);
            if (!cells[i][j]) {
                notes.push_back("cell (" + courses[i] + "," + courses[j] +
                                ") undefined: test set has a single class");
            }
        }
    }

    result.matrices = matrices_from_auc(std::move(courses), std::move(cells));
    for (std::string& note : notes) result.matrices.notes.push_back(std::move(note));
    return result;
}

PreparedCourse prepare_course(const CourseLog& course, const ActionTaxonomy& taxonomy,
                              bool raw_mode) {
    PreparedCourse p;
    p.code = course.course_code;
    p.level = usage_level(course);
    p.features = build_features(course, taxonomy);
    p.numeric_table = p.features.to_table();
    p.cutpoints = fit_cutpoints(p.numeric_table);
    p.discretized_table = apply_cutpoints(p.cutpoints, p.numeric_table);
    if (raw_mode) {
        p.raw_numeric = build_raw_features(course, taxonomy);
        p.raw_cutpoints = fit_cutpoints(p.raw_numeric);
        p.raw_discretized = apply_cutpoints(p.raw_cutpoints, p.raw_numeric);
    }
    return p;
}

namespace {

nlohmann::json experiment_metadata(const ExperimentOptions& options) {
    nlohmann::json meta;
    meta["tool"] = std::string(kToolVersion);
    meta["seed"] = options.seed;
    meta["tree"] = {{"min_instances_per_leaf", options.config.min_instances_per_leaf},
                    {"pruning_confidence", options.config.pruning_confidence},
                    {"pruning_enabled", options.config.pruning_enabled}};
    meta["balancing"] = "random undersampling of the majority class, per-course seed derived from "
                        "the global seed and course code";
    meta["diagonal"] = "resubstitution AUC on the balanced training dataset";
    meta["off_diagonal"] = "AUC on the target course's full unbalanced dataset, discretized with "
                           "the target course's own cutpoints";
    meta["engagement"] = "50 * (interactions / course max + active days / course max); equal "
                         "weighting of the two normalized components";
    meta["undefined_cells"] = "rendered as n/a and excluded from averages";
    return meta;
}

}  // namespace

ExperimentResult run_experiment(std::span<const CourseLog> courses, const ActionTaxonomy& taxonomy,
                                const ExperimentOptions& options) {
    ExperimentResult result;

    std::vector<PreparedCourse> prepared;
    for (const CourseLog& course : courses) {
        try {
            prepared.push_back(prepare_course(course, taxonomy, options.raw_mode));
        } catch (const DataError& e) {
            result.skipped.push_back("course '" + course.course_code + "' skipped: " + e.what());
            continue;
        }
        for (const std::string& w : prepared.back().features.warnings) {
            result.warnings.push_back(prepared.back().code + ": " + w);
        }
    }

    std::map<UsageLevel, std::vector<const PreparedCourse*>> groups;
    for (const PreparedCourse& p : prepared) groups[p.level].push_back(&p);
    for (auto& [level, members] : groups) {
        std::sort(members.begin(), members.end(),
                  [](const PreparedCourse* a, const PreparedCourse* b) { return a->code < b->code; });
    }

    // report order mirrors the usual presentation: high, medium, low
    for (const UsageLevel level : {UsageLevel::High, UsageLevel::Medium, UsageLevel::Low}) {
        const auto it = groups.find(level);
        if (it == groups.end()) continue;
        const auto& members = it->second;

        TransferReport report;
        report.level = level;
        for (const PreparedCourse* p : members) report.courses.push_back(p->code);
        report.metadata = experiment_metadata(options);
        report.metadata["group"] = std::string(to_string(level));
        report.metadata["courses"] = report.courses;

        std::vector<FeatureMode> modes = {FeatureMode::Ontology};
        if (options.raw_mode) modes.push_back(FeatureMode::Raw);
        for (const FeatureMode mode : modes) {
            std::vector<Representation> reprs;
            if (options.numeric) reprs.push_back(Representation::Numeric);
            if (options.discretized) reprs.push_back(Representation::Discretized);
            for (const Representation repr : reprs) {
                std::vector<DataTable> tables;
                tables.reserve(members.size());
                for (const PreparedCourse* p : members) {
                    if (mode == FeatureMode::Ontology) {
                        tables.push_back(repr == Representation::Numeric ? p->numeric_table
                                                                         : p->discretized_table);
                    } else {
                        tables.push_back(repr == Representation::Numeric ? p->raw_numeric
                                                                         : p->raw_discretized);
                    }
                }
                GroupEvaluation eval = evaluate_transfer(tables, options.config, options.seed);
                ReportBlock block;
                block.mode = mode;
                block.repr = repr;
                block.matrices = std::move(eval.matrices);
                block.models = std::move(eval.models);
                report.blocks.push_back(std::move(block));
            }
        }
        result.reports.push_back(std::move(report));
    }
    return result;
}

}  // namespace ontoport
