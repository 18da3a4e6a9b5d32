#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "dyncover/instance.hpp"

namespace dyncover {

struct ApproxParams {
    double eps = 0.5;
    int r = 8;                  // portions per level (grid side for quadrants)
    size_t baseThreshold = 32;  // nodes smaller than this are solved directly
    double c = 4;               // constant in the output-sensitive threshold delta
    double budgetFactor = 4;    // step budget = budgetFactor * delta * ceil(log2(n + 2))
    double deltaOverride = -1;  // root-level delta when >= 0; lets tests force the composite path
    int maxDepth = 24;
    int gridR = 0;              // quadrant grid side; 0 picks it from the node size
    int gridMaxDepth = 6;       // recursion cap for quadrant grids
    double deltaExp = 0.25;     // weighted quadrant grid side r = ceil(N^deltaExp)
    int64_t U = 1 << 20;        // weighted quadrants: integer weights in [1, U]
};

// Counters shared by every node of one structure.
struct CoverStats {
    uint64_t rootRebuilds = 0;
    uint64_t nodeRebuilds = 0;
    uint64_t oneSidedUpdates = 0;
    uint64_t oneSidedMultiRoutes = 0;  // one-sided updates that reached more than one child
    uint64_t compositeRefreshes = 0;   // root refreshes that fell back to the composite solution
    uint64_t explicitRefreshes = 0;
    uint64_t childUpdates = 0;  // updates forwarded from a node to a sub-structure
};

// Common interface over all dynamic set cover structures. Queries may refresh
// cached state, so they are non-const.
class DynamicCover {
public:
    virtual ~DynamicCover() = default;

    virtual void update(const UpdateOp& op) = 0;
    virtual bool feasible() = 0;
    virtual double cost() = 0;
    virtual size_t size() = 0;
    virtual int64_t multiplicity(const Range& r) = 0;
    virtual std::vector<Range> report() = 0;

    virtual const Instance& instance() const = 0;
    virtual const CoverStats& stats() const = 0;
    uint64_t rebuild_count() const { return stats().rootRebuilds; }
};

// Structure kinds: interval-u, interval-w, quadrant-u, quadrant-w, unitsquare-u, unitsquare-w.
std::unique_ptr<DynamicCover> make_cover(const std::string& kind, const Instance& inst, const ApproxParams& params);

// Checks the current solution against the instance: cover property when
// feasible, size and cost equal to the aggregate of report(), and
// multiplicity() agreeing with report() on every distinct range of the
// instance. Returns an empty string when everything holds.
std::string check_consistency(DynamicCover& cover);

// Instance kind and weightedness expected by a structure kind; ConfigError if unknown.
void structure_traits(const std::string& kind, Kind& instKind, bool& weighted);

}  // namespace dyncover
