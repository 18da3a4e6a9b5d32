#pragma once

#include <vector>

#include "dyncover/geometry.hpp"

namespace dyncover {

struct OracleResult {
    bool feasible = true;
    double cost = 0;
    size_t size = 0;
    std::vector<Range> witness;
};

// Minimum-cardinality interval cover by the left-to-right greedy sweep.
OracleResult exact_interval_unweighted(const std::vector<Point>& points, const std::vector<Interval>& intervals);

// Minimum-weight interval cover: D[j] = min over I containing p_j of w(I) + D[#points left of I.a].
OracleResult exact_interval_weighted(const std::vector<Point>& points, const std::vector<Interval>& intervals);

// Exhaustive branch-and-bound over distinct ranges; TooLarge above maxRanges.
OracleResult exact_bruteforce(const std::vector<Point>& points, const std::vector<Range>& ranges, size_t maxRanges = 16);

// Greedy by uncovered points per unit weight; an upper bound only.
OracleResult greedy_baseline(const std::vector<Point>& points, const std::vector<Range>& ranges);

}  // namespace dyncover
