#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ontoport/dataset.hpp"

namespace ontoport {

struct TrainConfig {
    int min_instances_per_leaf = 2;
    double pruning_confidence = 0.25;  // in (0, 0.5]
    bool pruning_enabled = true;
    std::uint64_t random_seed = 0;  // consumed by the balancer upstream, echoed in metadata
};

struct ClassCounts {
    std::int64_t fail = 0;
    std::int64_t pass = 0;

    std::int64_t total() const { return fail + pass; }
    // tie -> Fail (pessimistic toward at-risk prediction)
    Outcome majority() const { return pass > fail ? Outcome::Pass : Outcome::Fail; }
    std::int64_t errors() const { return majority() == Outcome::Pass ? fail : pass; }
    double pass_fraction() const {
        return total() > 0 ? static_cast<double>(pass) / static_cast<double>(total()) : 0.0;
    }
    friend bool operator==(const ClassCounts&, const ClassCounts&) = default;
};

// Shannon entropy in bits of a binary class distribution; 0*log0 = 0.
double entropy(ClassCounts counts);

struct SplitEvaluation {
    double gain = 0.0;
    double split_info = 0.0;
    double ratio = 0.0;     // 0 when split_info is 0
    bool eligible = false;  // information gain must be positive
};

SplitEvaluation gain_ratio(ClassCounts parent, std::span<const ClassCounts> children);

struct NumericSplit {
    double threshold = 0.0;
    double ratio = 0.0;
};

// Best binary threshold over all midpoints between consecutive distinct
// values; ties go to the smaller threshold. min_count constrains both sides.
// nullopt when no candidate has positive gain.
std::optional<NumericSplit> best_numeric_split(std::span<const std::pair<double, Outcome>> values,
                                               std::int64_t min_count = 1);

struct TreeNode {
    ClassCounts counts;
    bool leaf = true;
    std::size_t attribute = 0;  // internal nodes only
    // categorical split: one child per label observed during training
    std::vector<std::pair<Bin, std::unique_ptr<TreeNode>>> branches;
    // numeric split: value <= threshold goes left
    double threshold = 0.0;
    std::unique_ptr<TreeNode> left;
    std::unique_ptr<TreeNode> right;
};

struct DecisionTree {
    std::unique_ptr<TreeNode> root;
    std::string course_code;
    Representation repr = Representation::Discretized;
    std::vector<std::string> attribute_names;
    TrainConfig config;

    std::size_t n_leaves() const;
    std::size_t size() const;  // total node count
};

// Top-down gain-ratio induction with pessimistic subtree-replacement pruning.
// Throws SingleClassDataset / TooFewInstances.
DecisionTree train(const DataTable& table, const TrainConfig& config);

struct Prediction {
    Outcome outcome;
    double score;  // leaf Pass relative frequency, the AUC ranking score
};

Prediction predict(const DecisionTree& tree, const DataTable& table, std::size_t row);
std::vector<Prediction> predict_all(const DecisionTree& tree, const DataTable& table);

// Text rendering: one line per branch, '|' indentation, then the leaf and
// size trailer lines.
std::string render_tree(const DecisionTree& tree);

nlohmann::json tree_to_json(const DecisionTree& tree);
DecisionTree tree_from_json(const nlohmann::json& j);

// Upper confidence bound used by pessimistic pruning: the number of
// *additional* errors for a node with `n` instances and `e` observed errors.
double pruning_added_errors(double n, double e, double confidence);

}  // namespace ontoport
