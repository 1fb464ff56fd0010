#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ontoport {

inline constexpr std::string_view kToolVersion = "ontoport 0.1.0";

enum class Outcome : std::uint8_t { Fail = 0, Pass = 1 };
enum class Bin : std::uint8_t { Low = 0, High = 1 };
enum class Representation : std::uint8_t { Numeric = 0, Discretized = 1 };
enum class UsageLevel : std::uint8_t { Low = 0, Medium = 1, High = 2 };

std::string_view to_string(Outcome o);
std::string_view to_string(Bin b);
std::string_view to_string(Representation r);
std::string_view to_string(UsageLevel u);

// Data-level failures (bad input files, degenerate datasets). The CLI maps
// these to exit code 2; anything else unexpected becomes exit code 3.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

class MalformedRow : public DataError {
public:
    MalformedRow(std::size_t line, const std::string& reason)
        : DataError("line " + std::to_string(line) + ": " + reason), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

class DuplicateMark : public DataError {
public:
    explicit DuplicateMark(const std::string& student_id)
        : DataError("student '" + student_id + "' graded twice") {}
};

class EmptyLog : public DataError {
public:
    EmptyLog() : DataError("log contains zero valid event rows") {}
};

class DuplicateAction : public DataError {
public:
    explicit DuplicateAction(const std::string& action)
        : DataError("action '" + action + "' mapped more than once") {}
};

class UnknownCategory : public DataError {
public:
    explicit UnknownCategory(const std::string& name)
        : DataError("unknown category '" + name + "'") {}
};

class EmptyTaxonomy : public DataError {
public:
    EmptyTaxonomy() : DataError("taxonomy contains no mappings") {}
};

class NoGradedStudents : public DataError {
public:
    explicit NoGradedStudents(const std::string& course)
        : DataError("course '" + course + "' has no graded students") {}
};

class OutOfRangeMark : public DataError {
public:
    explicit OutOfRangeMark(double mark)
        : DataError("mark " + std::to_string(mark) + " outside [0,10]") {}
};

class EmptyDataset : public DataError {
public:
    EmptyDataset() : DataError("dataset has no rows") {}
};

class SchemaMismatch : public DataError {
public:
    explicit SchemaMismatch(const std::string& detail)
        : DataError("schema mismatch: " + detail) {}
};

class SingleClassDataset : public DataError {
public:
    explicit SingleClassDataset(const std::string& detail)
        : DataError("single-class dataset: " + detail) {}
};

class TooFewInstances : public DataError {
public:
    TooFewInstances(std::size_t have, std::size_t need)
        : DataError("dataset has " + std::to_string(have) + " rows, needs at least " +
                    std::to_string(need)) {}
};

class InvalidSpec : public DataError {
public:
    explicit InvalidSpec(const std::string& detail)
        : DataError("invalid course spec: " + detail) {}
};

}  // namespace ontoport
