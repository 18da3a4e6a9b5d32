#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "dyncover/instance.hpp"

namespace dyncover {

struct Workload {
    Instance initial;  // header-only state: kind, weighted, pointRange
    std::vector<UpdateOp> ops;
};

// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

Workload parse_workload(std::istream& in);
Workload parse_workload_text(const std::string& text);

std::string serialize_workload(const Instance& inst, const std::vector<UpdateOp>& ops);

}  // namespace dyncover
