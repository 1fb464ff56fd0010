#include "ontoport/discretizer.hpp"

#include <algorithm>

namespace ontoport {

CutpointModel fit_cutpoints(const DataTable& table) {
    if (table.n_rows() == 0) throw EmptyDataset();
    if (table.repr != Representation::Numeric) {
        throw SchemaMismatch("cutpoints are fit on numeric datasets");
    }
    CutpointModel model;
    model.fitted_on = table.course_code;
    model.attributes.reserve(table.n_attributes());
    for (std::size_t a = 0; a < table.n_attributes(); ++a) {
        const auto [lo, hi] = std::minmax_element(table.numeric[a].begin(), table.numeric[a].end());
        AttributeCutpoint cp;
        cp.name = table.attribute_names[a];
        cp.min = *lo;
        cp.max = *hi;
        cp.cutpoint = (cp.min + cp.max) / 2.0;
        cp.degenerate = (cp.min == cp.max);
        model.attributes.push_back(cp);
    }
    return model;
}

DataTable apply_cutpoints(const CutpointModel& model, const DataTable& table) {
    if (table.repr != Representation::Numeric) {
        throw SchemaMismatch("cutpoints apply to numeric datasets");
    }
    if (model.attributes.size() != table.n_attributes()) {
        throw SchemaMismatch("attribute count differs from cutpoint model");
    }
    for (std::size_t a = 0; a < model.attributes.size(); ++a) {
        if (model.attributes[a].name != table.attribute_names[a]) {
            throw SchemaMismatch("attribute '" + table.attribute_names[a] +
                                 "' does not match model attribute '" + model.attributes[a].name + "'");
        }
    }

    DataTable out;
    out.course_code = table.course_code;
    out.repr = Representation::Discretized;
    out.attribute_names = table.attribute_names;
    out.student_ids = table.student_ids;
    out.outcomes = table.outcomes;
    out.bins.resize(table.n_attributes());
    for (std::size_t a = 0; a < table.n_attributes(); ++a) {
        const AttributeCutpoint& cp = model.attributes[a];
        out.bins[a].reserve(table.n_rows());
        for (const double v : table.numeric[a]) {
            const Bin b = (!cp.degenerate && v >= cp.cutpoint) ? Bin::High : Bin::Low;
            out.bins[a].push_back(b);
        }
    }
    return out;
}

nlohmann::json cutpoints_to_json(const CutpointModel& model) {
    nlohmann::json attrs = nlohmann::json::array();
    for (const AttributeCutpoint& cp : model.attributes) {
        attrs.push_back({{"name", cp.name},
                         {"min", cp.min},
                         {"max", cp.max},
                         {"cutpoint", cp.cutpoint},
                         {"degenerate", cp.degenerate}});
    }
    return {{"fitted_on", model.fitted_on}, {"attributes", attrs}};
}

CutpointModel cutpoints_from_json(const nlohmann::json& j) {
    CutpointModel model;
    model.fitted_on = j.at("fitted_on").get<std::string>();
    for (const auto& a : j.at("attributes")) {
        AttributeCutpoint cp;
        cp.name = a.at("name").get<std::string>();
        cp.min = a.at("min").get<double>();
        cp.max = a.at("max").get<double>();
        cp.cutpoint = a.at("cutpoint").get<double>();
        cp.degenerate = a.at("degenerate").get<bool>();
        model.attributes.push_back(std::move(cp));
    }
    return model;
}

}  // namespace ontoport
