#include "ontoport/dataset.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>

#include "ontoport/csv.hpp"

namespace ontoport {

std::size_t DataTable::count(Outcome o) const {
    std::size_t n = 0;
    for (const Outcome x : outcomes) n += (x == o);
    return n;
}

bool DataTable::has_both_classes() const {
    return count(Outcome::Pass) > 0 && count(Outcome::Fail) > 0;
}

DataTable DataTable::select_rows(const std::vector<std::size_t>& indices) const {
    DataTable out;
    out.course_code = course_code;
    out.repr = repr;
    out.attribute_names = attribute_names;
    out.student_ids.reserve(indices.size());
    out.outcomes.reserve(indices.size());
    for (const std::size_t i : indices) {
        out.student_ids.push_back(student_ids[i]);
        out.outcomes.push_back(outcomes[i]);
    }
    if (repr == Representation::Numeric) {
        out.numeric.resize(numeric.size());
        for (std::size_t a = 0; a < numeric.size(); ++a) {
            out.numeric[a].reserve(indices.size());
            for (const std::size_t i : indices) out.numeric[a].push_back(numeric[a][i]);
        }
    } else {
        out.bins.resize(bins.size());
        for (std::size_t a = 0; a < bins.size(); ++a) {
            out.bins[a].reserve(indices.size());
            for (const std::size_t i : indices) out.bins[a].push_back(bins[a][i]);
        }
    }
    return out;
}

static std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

void write_dataset_csv(const DataTable& table, std::ostream& out) {
    std::vector<std::string> fields;
    fields.push_back("student_id");
    for (const std::string& name : table.attribute_names) fields.push_back(name);
    fields.push_back("outcome");
    write_csv_record(out, fields);

    for (std::size_t row = 0; row < table.n_rows(); ++row) {
        fields.clear();
        fields.push_back(table.student_ids[row]);
        for (std::size_t a = 0; a < table.n_attributes(); ++a) {
            if (table.repr == Representation::Numeric) {
                fields.push_back(format_value(table.numeric[a][row]));
            } else {
                fields.push_back(std::string(to_string(table.bins[a][row])));
            }
        }
        fields.push_back(std::string(to_string(table.outcomes[row])));
        write_csv_record(out, fields);
    }
}

DataTable read_dataset_csv(std::istream& in, std::string course_code) {
    CsvReader reader(in);
    std::vector<std::string> fields;
    if (!reader.next(fields) || fields.size() < 3 || fields.front() != "student_id" ||
        fields.back() != "outcome") {
        throw MalformedRow(1, "dataset header must be 'student_id,<attributes...>,outcome'");
    }
    DataTable table;
    table.course_code = std::move(course_code);
    table.attribute_names.assign(fields.begin() + 1, fields.end() - 1);
    const std::size_t n_attrs = table.attribute_names.size();

    bool repr_known = false;
    while (reader.next(fields)) {
        if (fields.size() != n_attrs + 2) {
            throw MalformedRow(reader.line(),
                               "expected " + std::to_string(n_attrs + 2) + " fields");
        }
        if (!repr_known) {
            const std::string& v = fields[1];
            table.repr = (v == "LOW" || v == "HIGH") ? Representation::Discretized
                                                     : Representation::Numeric;
            if (table.repr == Representation::Numeric) {
                table.numeric.assign(n_attrs, {});
            } else {
                table.bins.assign(n_attrs, {});
            }
            repr_known = true;
        }
        table.student_ids.push_back(fields[0]);
        for (std::size_t a = 0; a < n_attrs; ++a) {
            const std::string& v = fields[a + 1];
            if (table.repr == Representation::Numeric) {
                double x = 0.0;
                const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
                if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(x)) {
                    throw MalformedRow(reader.line(), "bad numeric value '" + v + "'");
                }
                table.numeric[a].push_back(x);
            } else {
                if (v == "LOW") table.bins[a].push_back(Bin::Low);
                else if (v == "HIGH") table.bins[a].push_back(Bin::High);
                else throw MalformedRow(reader.line(), "expected LOW or HIGH, got '" + v + "'");
            }
        }
        const std::string& oc = fields.back();
        if (oc == "Pass") table.outcomes.push_back(Outcome::Pass);
        else if (oc == "Fail") table.outcomes.push_back(Outcome::Fail);
        else throw MalformedRow(reader.line(), "expected Pass or Fail, got '" + oc + "'");
    }
    if (table.n_rows() == 0) throw EmptyDataset();
    return table;
}

}  // namespace ontoport
