#include "ontoport/report.hpp"

#include <cstdio>
#include <fstream>
#include <map>

#include "ontoport/csv.hpp"

namespace ontoport {

std::string report_value(const std::optional<double>& v, bool comma_decimals) {
    if (!v) return "n/a";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.3f", *v);
    std::string s = buf;
    if (comma_decimals) {
        const std::size_t dot = s.find('.');
        if (dot != std::string::npos) s[dot] = ',';
    }
    return s;
}

namespace {

std::string block_tag(const ReportBlock& block) {
    return std::string(to_string(block.mode)) + "." + std::string(to_string(block.repr));
}

void write_matrix_csv(const std::filesystem::path& path, const EvalMatrices& m, bool loss) {
    std::ofstream out(path);
    const auto& cells = loss ? m.loss_cells : m.auc_cells;
    const auto& row_avg = loss ? m.loss_row_avg : m.auc_row_avg;
    const auto grand = loss ? m.loss_grand_mean : m.auc_grand_mean;

    std::vector<std::string> fields;
    fields.push_back("course");
    for (const std::string& c : m.courses) fields.push_back(c);
    fields.push_back("avg");
    write_csv_record(out, fields);
    for (std::size_t i = 0; i < m.courses.size(); ++i) {
        fields.clear();
        fields.push_back(m.courses[i]);
        for (std::size_t j = 0; j < m.courses.size(); ++j) {
            if (loss && i == j) fields.push_back("-");
            else fields.push_back(report_value(cells[i][j]));
        }
        fields.push_back(report_value(row_avg[i]));
        write_csv_record(out, fields);
    }
    fields.assign(m.courses.size() + 2, "");
    fields.front() = "grand_mean";
    fields.back() = report_value(grand);
    write_csv_record(out, fields);
}

struct BlockPair {
    const ReportBlock* numeric = nullptr;
    const ReportBlock* discretized = nullptr;
};

void append_table(std::string& md, const std::vector<std::string>& courses, const BlockPair& pair,
                  bool loss, bool comma_decimals) {
    const auto cells_of = [&](const ReportBlock* b) {
        return loss ? &b->matrices.loss_cells : &b->matrices.auc_cells;
    };
    const auto avg_of = [&](const ReportBlock* b) {
        return loss ? &b->matrices.loss_row_avg : &b->matrices.auc_row_avg;
    };

    std::vector<const ReportBlock*> halves;
    if (pair.numeric) halves.push_back(pair.numeric);
    if (pair.discretized) halves.push_back(pair.discretized);

    md += "| course |";
    for (std::size_t h = 0; h < halves.size(); ++h) {
        for (const std::string& c : courses) md += ' ' + c + " |";
        md += " avg |";
        if (h + 1 < halves.size()) md += "   |";
    }
    md += '\n';
    md += "|---|";
    for (std::size_t h = 0; h < halves.size(); ++h) {
        for (std::size_t j = 0; j <= courses.size(); ++j) md += "---|";
        if (h + 1 < halves.size()) md += "---|";
    }
    md += '\n';

    for (std::size_t i = 0; i < courses.size(); ++i) {
        md += "| " + courses[i] + " |";
        for (std::size_t h = 0; h < halves.size(); ++h) {
            const ReportBlock* b = halves[h];
            for (std::size_t j = 0; j < courses.size(); ++j) {
                if (loss && i == j) md += " - |";
                else md += ' ' + report_value((*cells_of(b))[i][j], comma_decimals) + " |";
            }
            md += ' ' + report_value((*avg_of(b))[i], comma_decimals) + " |";
            if (h + 1 < halves.size()) md += "   |";
        }
        md += '\n';
    }

    md += "| *grand mean* |";
    for (std::size_t h = 0; h < halves.size(); ++h) {
        const ReportBlock* b = halves[h];
        for (std::size_t j = 0; j < courses.size(); ++j) md += "  |";
        md += ' ' +
              report_value(loss ? b->matrices.loss_grand_mean : b->matrices.auc_grand_mean,
                           comma_decimals) +
              " |";
        if (h + 1 < halves.size()) md += "   |";
    }
    md += "\n\n";
}

}  // namespace

std::string report_markdown(const TransferReport& report, bool comma_decimals) {
    std::string md;
    md += "# Transfer report - " + std::string(to_string(report.level)) + " usage group\n\n";
    md += "Courses: ";
    for (std::size_t i = 0; i < report.courses.size(); ++i) {
        if (i) md += ", ";
        md += report.courses[i];
    }
    md += "\n\n";

    std::map<FeatureMode, BlockPair> by_mode;
    for (const ReportBlock& block : report.blocks) {
        BlockPair& pair = by_mode[block.mode];
        if (block.repr == Representation::Numeric) pair.numeric = &block;
        else pair.discretized = &block;
    }

    for (const auto& [mode, pair] : by_mode) {
        md += std::string("## ") +
              (mode == FeatureMode::Ontology ? "With ontology" : "Without ontology (raw actions)") +
              "\n\n";
        std::string caption = "columns: ";
        if (pair.numeric) caption += "numeric datasets";
        if (pair.numeric && pair.discretized) caption += " (left), ";
        if (pair.discretized) caption += "discretized datasets";
        if (pair.numeric && pair.discretized) caption += " (right)";
        md += caption + "\n\n";
        md += "### AUC\n\n";
        append_table(md, report.courses, pair, false, comma_decimals);
        md += "### AUC loss\n\n";
        append_table(md, report.courses, pair, true, comma_decimals);
    }

    md += "## Metadata\n\n```json\n" + report.metadata.dump(2) + "\n```\n";

    std::vector<std::string> notes;
    for (const ReportBlock& block : report.blocks) {
        for (const std::string& n : block.matrices.notes) {
            notes.push_back(block_tag(block) + ": " + n);
        }
    }
    if (!notes.empty()) {
        md += "\n## Notes\n\n";
        for (const std::string& n : notes) md += "- " + n + '\n';
    }
    return md;
}

void write_report_csv(const TransferReport& report, const std::filesystem::path& dir) {
    for (const ReportBlock& block : report.blocks) {
        write_matrix_csv(dir / ("auc." + block_tag(block) + ".csv"), block.matrices, false);
        write_matrix_csv(dir / ("loss." + block_tag(block) + ".csv"), block.matrices, true);
    }
}

void emit_report(const TransferReport& report, const std::filesystem::path& out_dir, bool csv,
                 bool markdown, bool comma_decimals) {
    const std::filesystem::path dir = out_dir / std::string(to_string(report.level));
    std::filesystem::create_directories(dir);
    if (csv) write_report_csv(report, dir);
    if (markdown) {
        std::ofstream md(dir / "report.md");
        md << report_markdown(report, comma_decimals);
    }
    {
        std::ofstream meta(dir / "report_meta.json");
        meta << report.metadata.dump(2) << '\n';
    }
    const std::filesystem::path trees = dir / "trees";
    std::filesystem::create_directories(trees);
    for (const ReportBlock& block : report.blocks) {
        for (std::size_t i = 0; i < block.models.size(); ++i) {
            if (!block.models[i]) continue;
            const std::string stem = report.courses[i] + "." + block_tag(block);
            std::ofstream txt(trees / (stem + ".tree.txt"));
            txt << render_tree(*block.models[i]);
            std::ofstream js(trees / (stem + ".tree.json"));
            js << tree_to_json(*block.models[i]).dump(2) << '\n';
        }
    }
}

}  // namespace ontoport
