#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "ontoport/dataset.hpp"
#include "ontoport/discretizer.hpp"
#include "ontoport/event_log.hpp"
#include "ontoport/ontology.hpp"
#include "ontoport/tree.hpp"

namespace ontoport {

// Random undersampling of the majority class (without replacement) down to
// the minority class size; output row order is shuffled deterministically.
// Throws SingleClassDataset.
DataTable balance(const DataTable& table, std::uint64_t seed);

// Exact pair counts behind the Mann-Whitney AUC; Pass is the positive class.
struct AucPairCounts {
    std::int64_t higher = 0;  // Pass scored above Fail
    std::int64_t equal = 0;
    std::int64_t positives = 0;
    std::int64_t negatives = 0;

    double value() const {
        return (2.0 * static_cast<double>(higher) + static_cast<double>(equal)) /
               (2.0 * static_cast<double>(positives) * static_cast<double>(negatives));
    }
};

// nullopt when the set lacks one of the classes (recorded as an undefined
// cell, not an error).
std::optional<AucPairCounts> auc_pair_counts(std::span<const std::pair<double, Outcome>> scored);
std::optional<double> auc(std::span<const std::pair<double, Outcome>> scored);

// Within-group result matrices. AUC row averages include the diagonal; loss
// is diagonal-referenced (cell(i,j) = auc(i,i) - auc(i,j)) and its row
// averages cover off-diagonal cells only. Undefined cells are excluded from
// averages and counted.
struct EvalMatrices {
    std::vector<std::string> courses;
    std::vector<std::vector<std::optional<double>>> auc_cells;
    std::vector<std::optional<double>> auc_row_avg;
    std::optional<double> auc_grand_mean;
    std::vector<std::vector<std::optional<double>>> loss_cells;
    std::vector<std::optional<double>> loss_row_avg;
    std::optional<double> loss_grand_mean;
    std::size_t undefined_auc_cells = 0;
    std::vector<std::string> notes;

    std::optional<double> mean_off_diagonal_loss() const;
};

// Derives loss block, row averages and grand means from a raw AUC block.
EvalMatrices matrices_from_auc(std::vector<std::string> courses,
                               std::vector<std::vector<std::optional<double>>> auc_cells);

struct GroupEvaluation {
    EvalMatrices matrices;
    // aligned with matrices.courses; empty optional when training failed
    std::vector<std::optional<DecisionTree>> models;
};

// One usage-level group, one representation: balance + train per course,
// resubstitution AUC on the diagonal, full unbalanced target datasets off the
// diagonal.
GroupEvaluation evaluate_transfer(std::span<const DataTable> course_tables,
                                  const TrainConfig& config, std::uint64_t balance_seed);

enum class FeatureMode : std::uint8_t { Ontology = 0, Raw = 1 };
std::string_view to_string(FeatureMode m);

struct ExperimentOptions {
    TrainConfig config;
    std::uint64_t seed = 0;
    bool numeric = true;
    bool discretized = true;
    bool raw_mode = false;  // adds the low-level per-action feature blocks
};

struct ReportBlock {
    FeatureMode mode = FeatureMode::Ontology;
    Representation repr = Representation::Discretized;
    EvalMatrices matrices;
    std::vector<std::optional<DecisionTree>> models;
};

struct TransferReport {
    UsageLevel level = UsageLevel::Low;
    std::vector<std::string> courses;  // lexicographic by course code
    std::vector<ReportBlock> blocks;
    nlohmann::json metadata;
};

struct PreparedCourse {
    std::string code;
    UsageLevel level = UsageLevel::Low;
    FeatureDataset features;
    DataTable numeric_table;
    CutpointModel cutpoints;
    DataTable discretized_table;
    // raw mode (filled when requested)
    DataTable raw_numeric;
    CutpointModel raw_cutpoints;
    DataTable raw_discretized;
};

PreparedCourse prepare_course(const CourseLog& course, const ActionTaxonomy& taxonomy,
                              bool raw_mode);

struct ExperimentResult {
    std::vector<TransferReport> reports;  // group order High, Medium, Low
    std::vector<std::string> skipped;     // per-course featurization failures
    std::vector<std::string> warnings;
};

ExperimentResult run_experiment(std::span<const CourseLog> courses, const ActionTaxonomy& taxonomy,
                                const ExperimentOptions& options);

}  // namespace ontoport
