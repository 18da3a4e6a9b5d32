#pragma once

#include <vector>

#include "dyncover/geometry.hpp"

namespace dyncover::detail {

// Cut values lo = x_0 < x_1 < ... < x_k = hi splitting [lo, hi] into at most r
// portions with balanced coordinate counts. Copies of one value never straddle
// a cut. Returns {lo, hi} when no split is possible.
std::vector<double> choose_cuts(std::vector<double> coords, double lo, double hi, int r);

// Portion of v: -1 below x_0, k above x_k, otherwise half-open with the last
// portion closed.
int locate_ext(const std::vector<double>& cuts, double v);

// Interval meets portion i (as its points are assigned) without containing it.
bool meets_portion(const Interval& iv, const std::vector<double>& cuts, int i);

// Portions whose sub-instance holds iv; at most two. Returns the count.
int route_interval(const Interval& iv, const std::vector<double>& cuts, int out[2]);

// Approximation parameter for children: alpha * eps with alpha = 1 - 1/log_r n,
// floored at half the root parameter.
double child_eps(double eps, double rootEps, size_t n, int r);

}  // namespace dyncover::detail
