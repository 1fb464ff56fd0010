#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace ontoport {

// Minimal RFC-4180 style CSV: comma separated, double-quote escaping, quoted
// fields may contain commas, quotes and newlines. Reads both LF and CRLF.
class CsvReader {
public:
    explicit CsvReader(std::istream& in) : in_(in) {}

    // Reads the next record into `fields`. Returns false at end of input.
    // Blank lines are skipped. line() reports the line the record started on.
    bool next(std::vector<std::string>& fields);

    std::size_t line() const { return record_line_; }

private:
    std::istream& in_;
    std::size_t current_line_ = 0;
    std::size_t record_line_ = 0;
};

// Writes one record with minimal quoting and a trailing '\n'.
void write_csv_record(std::ostream& out, std::span<const std::string> fields);

}  // namespace ontoport
