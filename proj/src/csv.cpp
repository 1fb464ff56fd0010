#include "ontoport/csv.hpp"

#include <istream>
#include <ostream>

namespace ontoport {

bool CsvReader::next(std::vector<std::string>& fields) {
    fields.clear();
    int ch = in_.get();
    // skip blank lines
    while (ch == '\n' || ch == '\r') {
        if (ch == '\n') ++current_line_;
        ch = in_.get();
    }
    if (ch == std::char_traits<char>::eof()) return false;

    record_line_ = current_line_ + 1;
    std::string field;
    bool quoted = false;
    while (true) {
        if (ch == std::char_traits<char>::eof()) {
            fields.push_back(std::move(field));
            ++current_line_;
            return true;
        }
        const char c = static_cast<char>(ch);
        if (quoted) {
            if (c == '"') {
                const int peek = in_.peek();
                if (peek == '"') {
                    in_.get();
                    field.push_back('"');
                } else {
                    quoted = false;
                }
            } else {
                if (c == '\n') ++current_line_;
                field.push_back(c);
            }
        } else if (c == '"' && field.empty()) {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && in_.peek() == '\n') in_.get();
            ++current_line_;
            fields.push_back(std::move(field));
            return true;
        } else {
            field.push_back(c);
        }
        ch = in_.get();
    }
}

static bool needs_quoting(const std::string& s) {
    for (const char c : s) {
        if (c == ',' || c == '"' || c == '\n' || c == '\r') return true;
    }
    return false;
}

void write_csv_record(std::ostream& out, std::span<const std::string> fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out << ',';
        const std::string& f = fields[i];
        if (needs_quoting(f)) {
            out << '"';
            for (const char c : f) {
                if (c == '"') out << "\"\"";
                else out << c;
            }
            out << '"';
        } else {
            out << f;
        }
    }
    out << '\n';
}

}  // namespace ontoport
