#pragma once

#include <map>
#include <memory>
#include <vector>

#include "dyncover/cover.hpp"
#include "dyncover/support.hpp"

namespace dyncover {

// Dynamic (1+eps)-approximate unweighted interval set cover. The point range
// is split into portions; each portion has a recursive sub-structure over the
// points in it and the intervals that meet it without containing it. A
// solution is either an optimal greedy cover computed within a step budget,
// or a per-portion union of single containers and child solutions.
class IntervalCoverU : public DynamicCover {
public:
    IntervalCoverU(const Instance& inst, const ApproxParams& params);
    ~IntervalCoverU() override;

    void update(const UpdateOp& op) override;
    bool feasible() override;
    double cost() override { return static_cast<double>(size()); }
    size_t size() override;
    int64_t multiplicity(const Range& r) override;
    std::vector<Range> report() override;

    const Instance& instance() const override { return inst_; }
    const CoverStats& stats() const override { return stats_; }

    // Introspection for tests.
    bool last_refresh_explicit();
    double child_eps() const;
    int portions() const;

    struct Node;

private:
    Instance inst_;
    ApproxParams params_;
    CoverStats stats_;
    std::unique_ptr<Node> root_;
};

}  // namespace dyncover
