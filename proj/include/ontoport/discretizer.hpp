#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "ontoport/dataset.hpp"

namespace ontoport {

// Two-bin equal-width model: one cutpoint per attribute at the midpoint of
// the observed range. Degenerate attributes (min == max at fit time) map
// everything to LOW.
struct AttributeCutpoint {
    std::string name;
    double min = 0.0;
    double max = 0.0;
    double cutpoint = 0.0;
    bool degenerate = false;
};

struct CutpointModel {
    std::string fitted_on;  // course code of the fitting dataset
    std::vector<AttributeCutpoint> attributes;
};

CutpointModel fit_cutpoints(const DataTable& numeric_table);  // throws EmptyDataset

// value < cutpoint -> LOW, value >= cutpoint -> HIGH; degenerate -> LOW.
// Throws SchemaMismatch when attribute names differ.
DataTable apply_cutpoints(const CutpointModel& model, const DataTable& numeric_table);

nlohmann::json cutpoints_to_json(const CutpointModel& model);
CutpointModel cutpoints_from_json(const nlohmann::json& j);

}  // namespace ontoport
