#pragma once

#include <map>
#include <memory>
#include <vector>

#include "dyncover/cover.hpp"
#include "dyncover/support.hpp"

namespace dyncover {

// Catalog entry: the cheapest interval whose middle piece spans cuts s..t,
// i.e. it contains portions s..t-1.
struct LongEntry {
    int s = 0, t = 0;
    double w = 0;
};

struct DpResult {
    double cost = kInf;
    std::vector<int> longsUsed;  // indices into the catalog
    std::vector<int> shortUsed;  // portions covered by their own sub-solution
};

// Left-to-right DP over portions pL..pR: each portion is covered either by a
// catalog entry containing it (paying OPT before the entry's first portion) or
// by its short cost. Ties prefer the catalog entry, then the smaller start.
DpResult dp_over_portions(int pL, int pR, const std::vector<double>& shortCost, const std::vector<LongEntry>& longs);

// Dynamic (3+eps)-approximate weighted interval set cover. Each level
// enumerates pairs of one-sided candidates (L, R), covers what lies between
// them with a DP over portions, and hands L and R to the boundary
// sub-structures as free intervals. Free intervals are passed as parameters
// of the solve rather than inserted, so no rollback is needed.
class IntervalCoverW : public DynamicCover {
public:
    IntervalCoverW(const Instance& inst, const ApproxParams& params);
    ~IntervalCoverW() override;

    void update(const UpdateOp& op) override;
    bool feasible() override;
    double cost() override;
    size_t size() override;
    int64_t multiplicity(const Range& r) override;
    std::vector<Range> report() override;

    const Instance& instance() const override { return inst_; }
    const CoverStats& stats() const override { return stats_; }

    // Introspection for tests.
    double opt_estimate();
    double delta1();
    std::vector<Interval> left_candidates();
    std::vector<Interval> right_candidates();
    double child_eps() const;
    int portions() const;
    uint64_t fingerprint() const;  // hash of every node's stored multisets

    struct Node;

private:
    Instance inst_;
    ApproxParams params_;
    CoverStats stats_;
    std::unique_ptr<Node> root_;
};

}  // namespace dyncover
