#include "ontoport/tree.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>

namespace ontoport {

namespace {

// Candidates within 1e-9 of the incumbent's ratio count as ties and keep the
// incumbent (earlier attribute, then smaller threshold). The brute-force
// test oracle applies the same rule.
constexpr double kTieEps = 1e-9;
constexpr double kGainEps = 1e-10;

double plogp(double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; }

}  // namespace

double entropy(ClassCounts c) {
    const std::int64_t n = c.total();
    if (n == 0) return 0.0;
    const double pf = static_cast<double>(c.fail) / static_cast<double>(n);
    const double pp = static_cast<double>(c.pass) / static_cast<double>(n);
    return plogp(pf) + plogp(pp);
}

SplitEvaluation gain_ratio(ClassCounts parent, std::span<const ClassCounts> children) {
    SplitEvaluation ev;
    const std::int64_t n = parent.total();
    if (n == 0) return ev;
    double weighted = 0.0;
    for (const ClassCounts& child : children) {
        const double w = static_cast<double>(child.total()) / static_cast<double>(n);
        weighted += w * entropy(child);
        ev.split_info += plogp(w);
    }
    ev.gain = entropy(parent) - weighted;
    ev.eligible = ev.gain > kGainEps;
    ev.ratio = ev.split_info > 0.0 ? ev.gain / ev.split_info : 0.0;
    return ev;
}

std::optional<NumericSplit> best_numeric_split(std::span<const std::pair<double, Outcome>> values,
                                               std::int64_t min_count) {
    if (values.size() < 2) return std::nullopt;
    std::vector<std::pair<double, Outcome>> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    ClassCounts parent;
    for (const auto& [v, o] : sorted) (o == Outcome::Pass ? parent.pass : parent.fail)++;

    std::optional<NumericSplit> best;
    ClassCounts left;
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
        (sorted[i].second == Outcome::Pass ? left.pass : left.fail)++;
        if (sorted[i].first == sorted[i + 1].first) continue;
        const std::int64_t left_n = left.total();
        const std::int64_t right_n = parent.total() - left_n;
        if (left_n < min_count || right_n < min_count) continue;
        const ClassCounts right{parent.fail - left.fail, parent.pass - left.pass};
        const std::array<ClassCounts, 2> children = {left, right};
        const SplitEvaluation ev = gain_ratio(parent, children);
        if (!ev.eligible) continue;
        if (!best || ev.ratio > best->ratio + kTieEps) {
            best = NumericSplit{(sorted[i].first + sorted[i + 1].first) / 2.0, ev.ratio};
        }
    }
    return best;
}

namespace {

struct Builder {
    const DataTable& table;
    const TrainConfig& config;

    ClassCounts count(const std::vector<std::size_t>& rows) const {
        ClassCounts c;
        for (const std::size_t r : rows) {
            (table.outcomes[r] == Outcome::Pass ? c.pass : c.fail)++;
        }
        return c;
    }

    struct Choice {
        std::size_t attribute = 0;
        bool categorical = false;
        double threshold = 0.0;
        double ratio = 0.0;
    };

    std::optional<Choice> choose_split(const std::vector<std::size_t>& rows,
                                       ClassCounts parent) const {
        const std::int64_t m = config.min_instances_per_leaf;
        std::optional<Choice> best;
        for (std::size_t a = 0; a < table.n_attributes(); ++a) {
            if (table.repr == Representation::Discretized) {
                ClassCounts low, high;
                for (const std::size_t r : rows) {
                    ClassCounts& c = table.bins[a][r] == Bin::Low ? low : high;
                    (table.outcomes[r] == Outcome::Pass ? c.pass : c.fail)++;
                }
                if (low.total() < m || high.total() < m) continue;  // needs both labels observed
                const std::array<ClassCounts, 2> children = {low, high};
                const SplitEvaluation ev = gain_ratio(parent, children);
                if (!ev.eligible) continue;
                if (!best || ev.ratio > best->ratio + kTieEps) {
                    best = Choice{a, true, 0.0, ev.ratio};
                }
            } else {
                std::vector<std::pair<double, Outcome>> values;
                values.reserve(rows.size());
                for (const std::size_t r : rows) {
                    values.emplace_back(table.numeric[a][r], table.outcomes[r]);
                }
                const auto split = best_numeric_split(values, m);
                if (!split) continue;
                if (!best || split->ratio > best->ratio + kTieEps) {
                    best = Choice{a, false, split->threshold, split->ratio};
                }
            }
        }
        return best;
    }

    std::unique_ptr<TreeNode> grow(const std::vector<std::size_t>& rows) const {
        auto node = std::make_unique<TreeNode>();
        node->counts = count(rows);
        if (node->counts.fail == 0 || node->counts.pass == 0 ||
            node->counts.total() < 2 * config.min_instances_per_leaf) {
            return node;
        }
        const auto choice = choose_split(rows, node->counts);
        if (!choice) return node;

        node->leaf = false;
        node->attribute = choice->attribute;
        if (choice->categorical) {
            std::vector<std::size_t> low_rows, high_rows;
            for (const std::size_t r : rows) {
                (table.bins[choice->attribute][r] == Bin::Low ? low_rows : high_rows).push_back(r);
            }
            node->branches.emplace_back(Bin::Low, grow(low_rows));
            node->branches.emplace_back(Bin::High, grow(high_rows));
        } else {
            node->threshold = choice->threshold;
            std::vector<std::size_t> left_rows, right_rows;
            for (const std::size_t r : rows) {
                (table.numeric[choice->attribute][r] <= choice->threshold ? left_rows : right_rows)
                    .push_back(r);
            }
            node->left = grow(left_rows);
            node->right = grow(right_rows);
        }
        return node;
    }
};

// Wilson-style upper confidence bound on the error count, matching the
// classic C4.5 pessimistic estimate.
double normal_quantile(double p) {
    // Acklam's rational approximation to the inverse normal CDF
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
               (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

}  // namespace

double pruning_added_errors(double n, double e, double confidence) {
    if (n <= 0.0) return 0.0;
    if (e < 1.0) {
        const double base = n * (1.0 - std::pow(confidence, 1.0 / n));
        if (e == 0.0) return base;
        return base + e * (pruning_added_errors(n, 1.0, confidence) - base);
    }
    if (e + 0.5 >= n) return std::max(n - e, 0.0);
    const double z = normal_quantile(1.0 - confidence);
    const double f = (e + 0.5) / n;
    const double r = (f + z * z / (2.0 * n) +
                      z * std::sqrt(f / n - f * f / n + z * z / (4.0 * n * n))) /
                     (1.0 + z * z / n);
    return r * n - e;
}

namespace {

struct Pruner {
    double confidence;

    double leaf_estimate(const TreeNode& node) const {
        const double e = static_cast<double>(node.counts.errors());
        return e + pruning_added_errors(static_cast<double>(node.counts.total()), e, confidence);
    }

    double subtree_estimate(const TreeNode& node) const {
        if (node.leaf) return leaf_estimate(node);
        double sum = 0.0;
        for (const auto& [bin, child] : node.branches) sum += subtree_estimate(*child);
        if (node.left) sum += subtree_estimate(*node.left);
        if (node.right) sum += subtree_estimate(*node.right);
        return sum;
    }

    std::int64_t observed_errors(const TreeNode& node) const {
        if (node.leaf) return node.counts.errors();
        std::int64_t sum = 0;
        for (const auto& [bin, child] : node.branches) sum += observed_errors(*child);
        if (node.left) sum += observed_errors(*node.left);
        if (node.right) sum += observed_errors(*node.right);
        return sum;
    }

    void prune(TreeNode& node) const {
        if (node.leaf) return;
        for (auto& [bin, child] : node.branches) prune(*child);
        if (node.left) prune(*node.left);
        if (node.right) prune(*node.right);

        const double as_leaf = leaf_estimate(node);
        const double as_subtree = subtree_estimate(node);
        // A subtree that classifies its training slice perfectly is never
        // replaced by a leaf that would introduce errors.
        const bool breaks_perfect = observed_errors(node) == 0 && node.counts.errors() > 0;
        if (as_leaf <= as_subtree && !breaks_perfect) {
            node.leaf = true;
            node.branches.clear();
            node.left.reset();
            node.right.reset();
        }
    }
};

}  // namespace

DecisionTree train(const DataTable& table, const TrainConfig& config) {
    if (config.min_instances_per_leaf < 1) {
        throw std::invalid_argument("min_instances_per_leaf must be positive");
    }
    if (!(config.pruning_confidence > 0.0 && config.pruning_confidence <= 0.5)) {
        throw std::invalid_argument("pruning_confidence must be in (0, 0.5]");
    }
    const std::size_t need = 2 * static_cast<std::size_t>(config.min_instances_per_leaf);
    if (table.n_rows() < need) throw TooFewInstances(table.n_rows(), need);
    if (!table.has_both_classes()) {
        throw SingleClassDataset("course '" + table.course_code + "' needs both Pass and Fail rows");
    }

    DecisionTree tree;
    tree.course_code = table.course_code;
    tree.repr = table.repr;
    tree.attribute_names = table.attribute_names;
    tree.config = config;

    std::vector<std::size_t> rows(table.n_rows());
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
    tree.root = Builder{table, config}.grow(rows);
    if (config.pruning_enabled) Pruner{config.pruning_confidence}.prune(*tree.root);
    return tree;
}

namespace {

const TreeNode* descend(const TreeNode* node, const DataTable& table, std::size_t row) {
    while (!node->leaf) {
        if (!node->branches.empty()) {
            const Bin value = table.bins[node->attribute][row];
            const TreeNode* next = nullptr;
            for (const auto& [bin, child] : node->branches) {
                if (bin == value) next = child.get();
            }
            if (!next) {
                // label unseen at training time: follow the heavier branch
                std::int64_t best_weight = -1;
                for (const auto& [bin, child] : node->branches) {
                    if (child->counts.total() > best_weight) {
                        best_weight = child->counts.total();
                        next = child.get();
                    }
                }
            }
            node = next;
        } else {
            node = table.numeric[node->attribute][row] <= node->threshold ? node->left.get()
                                                                          : node->right.get();
        }
    }
    return node;
}

}  // namespace

Prediction predict(const DecisionTree& tree, const DataTable& table, std::size_t row) {
    if (table.repr != tree.repr) throw SchemaMismatch("row representation differs from model");
    if (table.attribute_names != tree.attribute_names) {
        throw SchemaMismatch("attribute names differ from model");
    }
    const TreeNode* leaf = descend(tree.root.get(), table, row);
    return {leaf->counts.majority(), leaf->counts.pass_fraction()};
}

std::vector<Prediction> predict_all(const DecisionTree& tree, const DataTable& table) {
    std::vector<Prediction> out;
    out.reserve(table.n_rows());
    for (std::size_t r = 0; r < table.n_rows(); ++r) out.push_back(predict(tree, table, r));
    return out;
}

namespace {

std::size_t count_nodes(const TreeNode& node) {
    if (node.leaf) return 1;
    std::size_t n = 1;
    for (const auto& [bin, child] : node.branches) n += count_nodes(*child);
    if (node.left) n += count_nodes(*node.left);
    if (node.right) n += count_nodes(*node.right);
    return n;
}

std::size_t count_leaves(const TreeNode& node) {
    if (node.leaf) return 1;
    std::size_t n = 0;
    for (const auto& [bin, child] : node.branches) n += count_leaves(*child);
    if (node.left) n += count_leaves(*node.left);
    if (node.right) n += count_leaves(*node.right);
    return n;
}

std::string upper_copy(std::string s) {
    for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return s;
}

std::string format_threshold(double t) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), t);
    return std::string(buf, res.ptr);
}

void render_node(const DecisionTree& tree, const TreeNode& node, std::size_t depth,
                 std::string& out) {
    const std::string indent = [&] {
        std::string s;
        for (std::size_t i = 0; i < depth; ++i) s += "| ";
        return s;
    }();
    const std::string attr = upper_copy(tree.attribute_names[node.attribute]);

    const auto emit_branch = [&](const std::string& condition, const TreeNode& child) {
        out += indent + attr + ' ' + condition;
        if (child.leaf) {
            out += ": ";
            out += to_string(child.counts.majority());
            out += '\n';
        } else {
            out += '\n';
            render_node(tree, child, depth + 1, out);
        }
    };

    if (!node.branches.empty()) {
        for (const auto& [bin, child] : node.branches) {
            emit_branch(std::string("= ") + std::string(to_string(bin)), *child);
        }
    } else {
        emit_branch("<= " + format_threshold(node.threshold), *node.left);
        emit_branch("> " + format_threshold(node.threshold), *node.right);
    }
}

}  // namespace

std::size_t DecisionTree::n_leaves() const { return root ? count_leaves(*root) : 0; }
std::size_t DecisionTree::size() const { return root ? count_nodes(*root) : 0; }

std::string render_tree(const DecisionTree& tree) {
    std::string out;
    if (tree.root->leaf) {
        out += ": ";
        out += to_string(tree.root->counts.majority());
        out += '\n';
    } else {
        render_node(tree, *tree.root, 0, out);
    }
    out += "\nNumber of Leaves: " + std::to_string(tree.n_leaves()) +
           "\nSize of the tree: " + std::to_string(tree.size()) + '\n';
    return out;
}

namespace {

nlohmann::json node_to_json(const TreeNode& node) {
    nlohmann::json j;
    j["fail"] = node.counts.fail;
    j["pass"] = node.counts.pass;
    if (node.leaf) {
        j["leaf"] = true;
        return j;
    }
    j["leaf"] = false;
    j["attribute"] = node.attribute;
    if (!node.branches.empty()) {
        j["split"] = "categorical";
        nlohmann::json children = nlohmann::json::array();
        for (const auto& [bin, child] : node.branches) {
            children.push_back({{"value", std::string(to_string(bin))}, {"node", node_to_json(*child)}});
        }
        j["children"] = std::move(children);
    } else {
        j["split"] = "numeric";
        j["threshold"] = node.threshold;
        j["left"] = node_to_json(*node.left);
        j["right"] = node_to_json(*node.right);
    }
    return j;
}

std::unique_ptr<TreeNode> node_from_json(const nlohmann::json& j) {
    auto node = std::make_unique<TreeNode>();
    node->counts.fail = j.at("fail").get<std::int64_t>();
    node->counts.pass = j.at("pass").get<std::int64_t>();
    node->leaf = j.at("leaf").get<bool>();
    if (node->leaf) return node;
    node->attribute = j.at("attribute").get<std::size_t>();
    const std::string split = j.at("split").get<std::string>();
    if (split == "categorical") {
        for (const auto& child : j.at("children")) {
            const std::string value = child.at("value").get<std::string>();
            node->branches.emplace_back(value == "HIGH" ? Bin::High : Bin::Low,
                                        node_from_json(child.at("node")));
        }
    } else {
        node->threshold = j.at("threshold").get<double>();
        node->left = node_from_json(j.at("left"));
        node->right = node_from_json(j.at("right"));
    }
    return node;
}

}  // namespace

nlohmann::json tree_to_json(const DecisionTree& tree) {
    return {{"format", "ontoport-tree/1"},
            {"course", tree.course_code},
            {"representation", std::string(to_string(tree.repr))},
            {"config",
             {{"min_instances_per_leaf", tree.config.min_instances_per_leaf},
              {"pruning_confidence", tree.config.pruning_confidence},
              {"pruning_enabled", tree.config.pruning_enabled},
              {"random_seed", tree.config.random_seed}}},
            {"attributes", tree.attribute_names},
            {"root", node_to_json(*tree.root)}};
}

DecisionTree tree_from_json(const nlohmann::json& j) {
    if (j.value("format", "") != "ontoport-tree/1") {
        throw SchemaMismatch("not an ontoport tree file");
    }
    DecisionTree tree;
    tree.course_code = j.at("course").get<std::string>();
    tree.repr = j.at("representation").get<std::string>() == "numeric" ? Representation::Numeric
                                                                       : Representation::Discretized;
    tree.attribute_names = j.at("attributes").get<std::vector<std::string>>();
    const auto& cfg = j.at("config");
    tree.config.min_instances_per_leaf = cfg.at("min_instances_per_leaf").get<int>();
    tree.config.pruning_confidence = cfg.at("pruning_confidence").get<double>();
    tree.config.pruning_enabled = cfg.at("pruning_enabled").get<bool>();
    tree.config.random_seed = cfg.at("random_seed").get<std::uint64_t>();
    tree.root = node_from_json(j.at("root"));
    return tree;
}

}  // namespace ontoport
