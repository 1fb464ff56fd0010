#include "ontoport/core.hpp"

namespace ontoport {

std::string_view to_string(Outcome o) { return o == Outcome::Pass ? "Pass" : "Fail"; }

std::string_view to_string(Bin b) { return b == Bin::High ? "HIGH" : "LOW"; }

std::string_view to_string(Representation r) {
    return r == Representation::Numeric ? "numeric" : "discretized";
}

std::string_view to_string(UsageLevel u) {
    switch (u) {
        case UsageLevel::Low: return "low";
        case UsageLevel::Medium: return "medium";
        default: return "high";
    }
}

}  // namespace ontoport
