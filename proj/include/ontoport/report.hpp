#pragma once

#include <filesystem>
#include <string>

#include "ontoport/transfer.hpp"

namespace ontoport {

// Formats a value for report tables: 3 decimals, optional comma decimal mark,
// "n/a" for undefined cells.
std::string report_value(const std::optional<double>& v, bool comma_decimals = false);

// One CSV per matrix: `auc.<mode>.<repr>.csv` / `loss.<mode>.<repr>.csv`
// inside `dir`. Loss diagonals print as "-", undefined cells as "n/a".
void write_report_csv(const TransferReport& report, const std::filesystem::path& dir);

// Markdown layout: per feature mode, the AUC table above the loss table,
// numeric columns left of discretized columns.
std::string report_markdown(const TransferReport& report, bool comma_decimals = false);

// Writes CSVs, report.md, metadata and per-model tree renderings under
// `out_dir/<level>/`.
void emit_report(const TransferReport& report, const std::filesystem::path& out_dir,
                 bool csv, bool markdown, bool comma_decimals);

}  // namespace ontoport
