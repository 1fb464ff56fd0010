#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ontoport/core.hpp"

namespace ontoport {

// Column-major attribute table shared by the featurizer, the discretizer and
// the tree learner. Exactly one of `numeric` / `bins` is populated, matching
// `repr`.
struct DataTable {
    std::string course_code;
    Representation repr = Representation::Numeric;
    std::vector<std::string> attribute_names;
    std::vector<std::string> student_ids;
    std::vector<Outcome> outcomes;
    std::vector<std::vector<double>> numeric;  // [attribute][row]
    std::vector<std::vector<Bin>> bins;        // [attribute][row]

    std::size_t n_rows() const { return outcomes.size(); }
    std::size_t n_attributes() const { return attribute_names.size(); }

    std::size_t count(Outcome o) const;
    bool has_both_classes() const;

    // Row-subset copy in the given order (indices may repeat).
    DataTable select_rows(const std::vector<std::size_t>& indices) const;
};

// CSV form: header `student_id,<attributes...>,outcome`; numeric values with
// 6 decimal places, discretized values LOW/HIGH, outcome Pass/Fail.
void write_dataset_csv(const DataTable& table, std::ostream& out);
DataTable read_dataset_csv(std::istream& in, std::string course_code);

}  // namespace ontoport
