#include <doctest.h>

#include <sstream>

#include "ontoport/rng.hpp"
#include "ontoport/tree.hpp"
#include "oracles.hpp"

using namespace ontoport;

namespace {

DataTable binned_table(const std::vector<std::string>& attrs,
                       const std::vector<std::vector<Bin>>& cols,
                       const std::vector<Outcome>& outcomes) {
    DataTable t;
    t.course_code = "T1";
    t.repr = Representation::Discretized;
    t.attribute_names = attrs;
    t.bins = cols;
    t.outcomes = outcomes;
    for (std::size_t r = 0; r < outcomes.size(); ++r) t.student_ids.push_back("s" + std::to_string(r));
    return t;
}

// outcome = Pass iff communicating = HIGH, 10 rows per class
DataTable communicating_table() {
    std::vector<Bin> learning, communicating, engagement;
    std::vector<Outcome> y;
    for (int i = 0; i < 20; ++i) {
        const bool pass = i < 10;
        learning.push_back(i % 2 ? Bin::Low : Bin::High);  // uninformative
        communicating.push_back(pass ? Bin::High : Bin::Low);
        engagement.push_back(Bin::Low);  // constant
        y.push_back(pass ? Outcome::Pass : Outcome::Fail);
    }
    return binned_table({"learning", "communicating", "engagement"},
                        {learning, communicating, engagement}, y);
}

DataTable random_table(Rng& rng) {
    DataTable t;
    t.course_code = "R";
    t.repr = rng.next_below(2) ? Representation::Discretized : Representation::Numeric;
    const std::size_t n_attrs = 1 + rng.next_below(4);
    const std::size_t n_rows = 4 + rng.next_below(17);
    for (std::size_t a = 0; a < n_attrs; ++a) t.attribute_names.push_back("a" + std::to_string(a));
    for (std::size_t r = 0; r < n_rows; ++r) {
        t.student_ids.push_back("s" + std::to_string(r));
        t.outcomes.push_back(rng.next_below(2) ? Outcome::Pass : Outcome::Fail);
    }
    if (t.repr == Representation::Numeric) {
        t.numeric.resize(n_attrs);
        for (std::size_t a = 0; a < n_attrs; ++a) {
            for (std::size_t r = 0; r < n_rows; ++r) {
                // small value grid to provoke duplicates and ties
                t.numeric[a].push_back(static_cast<double>(rng.next_below(8)));
            }
        }
    } else {
        t.bins.resize(n_attrs);
        for (std::size_t a = 0; a < n_attrs; ++a) {
            for (std::size_t r = 0; r < n_rows; ++r) {
                t.bins[a].push_back(rng.next_below(2) ? Bin::High : Bin::Low);
            }
        }
    }
    return t;
}

}  // namespace

TEST_CASE("entropy spot values") {
    CHECK(entropy({2, 2}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(entropy({0, 4}) == 0.0);
    CHECK(entropy({4, 0}) == 0.0);
    CHECK(entropy({1, 3}) == doctest::Approx(0.811278).epsilon(1e-6));
    CHECK(entropy({3, 1}) == doctest::Approx(0.811278).epsilon(1e-6));
    CHECK(entropy({0, 0}) == 0.0);
}

TEST_CASE("gain_ratio spot values") {
    SUBCASE("perfect split of a balanced parent") {
        const std::array<ClassCounts, 2> children = {ClassCounts{0, 2}, ClassCounts{2, 0}};
        const auto ev = gain_ratio({2, 2}, children);
        CHECK(ev.gain == doctest::Approx(1.0));
        CHECK(ev.split_info == doctest::Approx(1.0));
        CHECK(ev.ratio == doctest::Approx(1.0));
        CHECK(ev.eligible);
    }
    SUBCASE("uninformative split is ineligible") {
        const std::array<ClassCounts, 2> children = {ClassCounts{1, 1}, ClassCounts{1, 1}};
        const auto ev = gain_ratio({2, 2}, children);
        CHECK(ev.gain == doctest::Approx(0.0));
        CHECK(!ev.eligible);
    }
    SUBCASE("skewed perfect split") {
        const std::array<ClassCounts, 2> children = {ClassCounts{0, 3}, ClassCounts{1, 0}};
        const auto ev = gain_ratio({1, 3}, children);
        CHECK(ev.gain == doctest::Approx(0.811278).epsilon(1e-6));
        CHECK(ev.split_info == doctest::Approx(0.811278).epsilon(1e-6));
        CHECK(ev.ratio == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("best_numeric_split") {
    using P = std::pair<double, Outcome>;
    SUBCASE("class boundary midpoint") {
        const std::vector<P> v = {{1, Outcome::Fail}, {2, Outcome::Fail},
                                  {8, Outcome::Pass}, {9, Outcome::Pass}};
        const auto split = best_numeric_split(v);
        REQUIRE(split.has_value());
        CHECK(split->threshold == doctest::Approx(5.0));
        CHECK(split->ratio == doctest::Approx(1.0));
    }
    SUBCASE("balanced both sides has no positive gain") {
        const std::vector<P> v = {{1, Outcome::Fail}, {2, Outcome::Pass},
                                  {1, Outcome::Pass}, {2, Outcome::Fail}};
        CHECK(!best_numeric_split(v).has_value());
    }
    SUBCASE("single distinct value") {
        const std::vector<P> v = {{3, Outcome::Pass}, {3, Outcome::Pass}};
        CHECK(!best_numeric_split(v).has_value());
    }
    SUBCASE("tie broken by smaller threshold") {
        // symmetric data: thresholds 2.5 and 4.5 both isolate one class pair
        const std::vector<P> v = {{1, Outcome::Pass}, {2, Outcome::Pass}, {3, Outcome::Fail},
                                  {4, Outcome::Fail}, {5, Outcome::Pass}, {6, Outcome::Pass}};
        const auto split = best_numeric_split(v);
        REQUIRE(split.has_value());
        CHECK(split->threshold == doctest::Approx(2.5));
    }
}

TEST_CASE("train reproduces a one-split concept") {
    const DecisionTree tree = train(communicating_table(), {});
    CHECK(tree.n_leaves() == 2);
    CHECK(tree.size() == 3);
    CHECK(render_tree(tree) ==
          "COMMUNICATING = LOW: Fail\n"
          "COMMUNICATING = HIGH: Pass\n"
          "\n"
          "Number of Leaves: 2\n"
          "Size of the tree: 3\n");
}

TEST_CASE("train on the nested four-attribute concept") {
    // 12/8/5/3 pass archetypes, each HIGH on exactly one attribute, plus 12
    // all-LOW fails
    std::vector<std::vector<Bin>> cols(5);
    std::vector<Outcome> y;
    const auto add_rows = [&](int count, int high_attr, Outcome outcome) {
        for (int i = 0; i < count; ++i) {
            for (int a = 0; a < 5; ++a) {
                cols[a].push_back(a == high_attr ? Bin::High : Bin::Low);
            }
            y.push_back(outcome);
        }
    };
    add_rows(12, 0, Outcome::Pass);
    add_rows(8, 1, Outcome::Pass);
    add_rows(5, 2, Outcome::Pass);
    add_rows(3, 3, Outcome::Pass);
    add_rows(12, -1, Outcome::Fail);
    const auto table = binned_table(
        {"learning", "communicating", "working", "evaluating", "engagement"}, cols, y);

    const DecisionTree tree = train(table, {});
    CHECK(tree.n_leaves() == 5);
    CHECK(tree.size() == 9);
    CHECK(render_tree(tree) ==
          "LEARNING = LOW\n"
          "| COMMUNICATING = LOW\n"
          "| | WORKING = LOW\n"
          "| | | EVALUATING = LOW: Fail\n"
          "| | | EVALUATING = HIGH: Pass\n"
          "| | WORKING = HIGH: Pass\n"
          "| COMMUNICATING = HIGH: Pass\n"
          "LEARNING = HIGH: Pass\n"
          "\n"
          "Number of Leaves: 5\n"
          "Size of the tree: 9\n");
}

TEST_CASE("train input validation") {
    SUBCASE("single class") {
        auto t = communicating_table();
        t.outcomes.assign(t.n_rows(), Outcome::Pass);
        CHECK_THROWS_AS(train(t, {}), SingleClassDataset);
    }
    SUBCASE("too few rows") {
        auto t = communicating_table();
        const std::vector<std::size_t> three = {0, 1, 10};
        CHECK_THROWS_AS(train(t.select_rows(three), {}), TooFewInstances);
    }
}

TEST_CASE("predict routing and scores") {
    const DecisionTree tree = train(communicating_table(), {});
    auto probe = binned_table({"learning", "communicating", "engagement"},
                              {{Bin::Low, Bin::Low}, {Bin::High, Bin::Low}, {Bin::Low, Bin::Low}},
                              {Outcome::Fail, Outcome::Fail});
    const Prediction high = predict(tree, probe, 0);
    CHECK(high.outcome == Outcome::Pass);
    CHECK(high.score == 1.0);
    const Prediction low = predict(tree, probe, 1);
    CHECK(low.outcome == Outcome::Fail);
    CHECK(low.score == 0.0);

    SUBCASE("schema mismatch") {
        auto wrong = probe;
        wrong.attribute_names[0] = "other";
        CHECK_THROWS_AS(predict(tree, wrong, 0), SchemaMismatch);
    }
}

TEST_CASE("leaf score is the pass relative frequency") {
    // one HIGH fail row makes the HIGH leaf (1 fail, 3 pass)
    std::vector<Bin> communicating = {Bin::High, Bin::High, Bin::High, Bin::High,
                                      Bin::Low,  Bin::Low,  Bin::Low,  Bin::Low};
    std::vector<Outcome> y = {Outcome::Pass, Outcome::Pass, Outcome::Pass, Outcome::Fail,
                              Outcome::Fail, Outcome::Fail, Outcome::Fail, Outcome::Fail};
    const auto table = binned_table({"communicating"}, {communicating}, y);
    const DecisionTree tree = train(table, {2, 0.25, false, 0});
    const Prediction p = predict(tree, table, 0);
    CHECK(p.outcome == Outcome::Pass);
    CHECK(p.score == doctest::Approx(0.75));
}

TEST_CASE("numeric boundary value takes the left branch") {
    DataTable t;
    t.course_code = "T1";
    t.repr = Representation::Numeric;
    t.attribute_names = {"engagement"};
    t.numeric = {{1, 2, 3, 4, 10, 11, 12, 13}};
    t.outcomes = {Outcome::Fail, Outcome::Fail, Outcome::Fail, Outcome::Fail,
                  Outcome::Pass, Outcome::Pass, Outcome::Pass, Outcome::Pass};
    for (std::size_t r = 0; r < 8; ++r) t.student_ids.push_back("s" + std::to_string(r));
    const DecisionTree tree = train(t, {});
    REQUIRE(!tree.root->leaf);
    const double threshold = tree.root->threshold;
    CHECK(threshold == doctest::Approx(7.0));

    DataTable probe = t;
    probe.numeric[0][0] = threshold;  // exactly at the threshold
    CHECK(predict(tree, probe, 0).outcome == Outcome::Fail);
}

TEST_CASE("single-leaf rendering") {
    // no informative attribute: root stays a leaf after pruning
    std::vector<Bin> a = {Bin::Low, Bin::Low, Bin::Low, Bin::Low, Bin::High, Bin::High};
    std::vector<Outcome> y = {Outcome::Pass, Outcome::Pass, Outcome::Fail,
                              Outcome::Fail, Outcome::Pass, Outcome::Fail};
    const auto table = binned_table({"learning"}, {a}, y);
    const DecisionTree tree = train(table, {});
    CHECK(tree.n_leaves() == 1);
    CHECK(tree.size() == 1);
    CHECK(render_tree(tree) == ": Fail\n\nNumber of Leaves: 1\nSize of the tree: 1\n");
}

TEST_CASE("root split matches the brute-force enumeration") {
    Rng rng(987654321);
    const TrainConfig no_prune{2, 0.25, false, 0};
    for (int round = 0; round < 60; ++round) {
        DataTable t = random_table(rng);
        if (!t.has_both_classes() || t.n_rows() < 4) continue;
        const DecisionTree tree = train(t, no_prune);
        const auto expected = oracles::brute_force_root_split(t, no_prune.min_instances_per_leaf);
        if (!expected) {
            CHECK(tree.root->leaf);
            continue;
        }
        REQUIRE(!tree.root->leaf);
        CHECK(tree.root->attribute == expected->attribute);
        if (!expected->categorical) {
            CHECK(tree.root->threshold == doctest::Approx(expected->threshold).epsilon(1e-12));
        }
    }
}

TEST_CASE("tree structural invariants on random data") {
    Rng rng(24681012);
    for (int round = 0; round < 60; ++round) {
        DataTable t = random_table(rng);
        if (!t.has_both_classes() || t.n_rows() < 4) continue;

        const DecisionTree unpruned = train(t, {2, 0.25, false, 0});
        const DecisionTree pruned = train(t, {2, 0.25, true, 0});

        // leaf counts conservation
        std::int64_t leaf_total = 0;
        const auto sum_leaves = [&](const TreeNode& node, const auto& self) -> void {
            if (node.leaf) {
                leaf_total += node.counts.total();
                return;
            }
            for (const auto& [bin, child] : node.branches) self(*child, self);
            if (node.left) self(*node.left, self);
            if (node.right) self(*node.right, self);
        };
        sum_leaves(*unpruned.root, sum_leaves);
        CHECK(leaf_total == static_cast<std::int64_t>(t.n_rows()));

        // binary branching: size = 2*leaves - 1
        CHECK(unpruned.size() == 2 * unpruned.n_leaves() - 1);
        CHECK(pruned.size() == 2 * pruned.n_leaves() - 1);

        // pruning never increases the pessimistic error estimate
        const auto estimate = [&](const TreeNode& node, const auto& self) -> double {
            if (node.leaf) {
                const double e = static_cast<double>(node.counts.errors());
                return e + pruning_added_errors(static_cast<double>(node.counts.total()), e, 0.25);
            }
            double sum = 0.0;
            for (const auto& [bin, child] : node.branches) sum += self(*child, self);
            if (node.left) sum += self(*node.left, self);
            if (node.right) sum += self(*node.right, self);
            return sum;
        };
        CHECK(estimate(*pruned.root, estimate) <= estimate(*unpruned.root, estimate) + 1e-9);

        // a perfectly classifying tree keeps its training predictions
        bool perfect = true;
        for (std::size_t r = 0; r < t.n_rows(); ++r) {
            if (predict(unpruned, t, r).outcome != t.outcomes[r]) perfect = false;
        }
        if (perfect) {
            for (std::size_t r = 0; r < t.n_rows(); ++r) {
                CHECK(predict(pruned, t, r).outcome == t.outcomes[r]);
            }
        }

        // prediction is deterministic and total
        for (std::size_t r = 0; r < t.n_rows(); ++r) {
            const Prediction a = predict(pruned, t, r);
            const Prediction b = predict(pruned, t, r);
            CHECK(a.outcome == b.outcome);
            CHECK(a.score == b.score);
        }
    }
}

TEST_CASE("json serialization round trip preserves predictions") {
    const DataTable table = communicating_table();
    const DecisionTree tree = train(table, {});
    std::stringstream buffer;
    buffer << tree_to_json(tree);
    const DecisionTree loaded = tree_from_json(nlohmann::json::parse(buffer.str()));
    CHECK(loaded.repr == tree.repr);
    CHECK(loaded.attribute_names == tree.attribute_names);
    CHECK(render_tree(loaded) == render_tree(tree));
    for (std::size_t r = 0; r < table.n_rows(); ++r) {
        CHECK(predict(loaded, table, r).score == predict(tree, table, r).score);
    }
}

TEST_CASE("unseen categorical branch routes to the heavier child") {
    // train with both labels, then drop the HIGH branch by hand to simulate a
    // label the node never saw
    const DecisionTree tree = train(communicating_table(), {});
    DecisionTree lopsided;
    lopsided.course_code = tree.course_code;
    lopsided.repr = tree.repr;
    lopsided.attribute_names = tree.attribute_names;
    lopsided.config = tree.config;
    lopsided.root = std::make_unique<TreeNode>();
    lopsided.root->leaf = false;
    lopsided.root->attribute = 1;
    auto only_child = std::make_unique<TreeNode>();
    only_child->counts = {10, 0};
    lopsided.root->branches.emplace_back(Bin::Low, std::move(only_child));
    lopsided.root->counts = {10, 0};

    auto probe = binned_table({"learning", "communicating", "engagement"},
                              {{Bin::Low}, {Bin::High}, {Bin::Low}}, {Outcome::Pass});
    CHECK(predict(lopsided, probe, 0).outcome == Outcome::Fail);
}
