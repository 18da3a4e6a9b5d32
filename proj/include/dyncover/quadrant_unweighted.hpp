#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "dyncover/cover.hpp"
#include "dyncover/support.hpp"

namespace dyncover {

// Axis-parallel region with half-open right/top edges unless flagged closed.
struct Region {
    Rect box;
    bool closedRight = true;
    bool closedTop = true;
    bool inside(double x, double y) const {
        return box.x0 <= x && (closedRight ? x <= box.x1 : x < box.x1) && box.y0 <= y &&
               (closedTop ? y <= box.y1 : y < box.y1);
    }
};

// Output-sensitive quadrant cover. Each round takes the lexicographically
// smallest uncovered point and adds, per direction, the quadrant containing it
// that reaches furthest into the unswept half-plane: lowest vertex for NE,
// highest for SE, rightmost for NW and SW. East-facing picks leave an open
// horizontal band uncovered; west-facing picks form two staircases. The next
// point is found by rectangle queries over the band between staircase steps.
class QuadrantSweep {
public:
    enum class Status { Done, Infeasible, Exhausted };
    struct Result {
        Status status = Status::Done;
        std::vector<Quadrant> picks;  // distinct
        size_t rounds = 0;
        double steps = 0;
    };

    // Distinct values only; callers keep multiplicities.
    void insert_point(const Point& p);
    void erase_point(const Point& p);
    void insert(const Quadrant& q);
    void erase(const Quadrant& q);
    void clear();

    // One step per round plus one per extra band probe. extra quadrants take
    // part as if stored.
    Result run(double budget, const std::vector<Quadrant>& extra = {}) const;

private:
    RangeMinMax2D pts_{RangeMinMax2D::Mode::MinWeight};
    std::map<Point, uint64_t> ptHandle_;
    RangeMinMax2D dirs_[4] = {
        RangeMinMax2D(RangeMinMax2D::Mode::MinWeight),  // NE: min vy
        RangeMinMax2D(RangeMinMax2D::Mode::MaxWeight),  // NW: max vx
        RangeMinMax2D(RangeMinMax2D::Mode::MaxWeight),  // SE: max vy
        RangeMinMax2D(RangeMinMax2D::Mode::MaxWeight),  // SW: max vx, stored with -vy
    };
    std::map<Quadrant, uint64_t> qHandle_;

    std::optional<Quadrant> pick(Dir d, const Point& p, const std::vector<Quadrant>& extra) const;
};

// Dynamic O(1)-approximate unweighted quadrant set cover on an r x r grid with
// cell, row and column sub-structures. A solution is either the sweep result
// within a step budget, or the four maximal trivial quadrants, the interior
// cells (one container or the cell solution), and the row/column solutions
// around them computed with the trivial quadrants passed in as virtual ranges.
class QuadrantCoverU : public DynamicCover {
public:
    QuadrantCoverU(const Instance& inst, const ApproxParams& params);
    ~QuadrantCoverU() override;

    void update(const UpdateOp& op) override;
    bool feasible() override;
    double cost() override { return static_cast<double>(size()); }
    size_t size() override;
    int64_t multiplicity(const Range& r) override;
    std::vector<Range> report() override;

    const Instance& instance() const override { return inst_; }
    const CoverStats& stats() const override { return stats_; }

    // Introspection for tests.
    struct ChildView {
        Region region;
        std::vector<Point> points;
        std::vector<Quadrant> quadrants;  // distinct members, specials included
        std::vector<Quadrant> specials;
    };
    bool last_refresh_explicit();
    double child_eps() const;
    int grid_side() const;  // 0 at a leaf root
    int epoch_divisor() const;
    std::vector<ChildView> children() const;
    uint64_t fingerprint() const;

    struct Node;

private:
    Instance inst_;
    ApproxParams params_;
    CoverStats stats_;
    std::unique_ptr<Node> root_;
};

// Grid side for a node of n elements: max(4, ceil(2^(sqrt(log2 n) / 2))) unless
// overridden, capped so a cell keeps baseThreshold elements; below 2 means leaf.
int quadrant_grid_side(size_t n, const ApproxParams& params);

}  // namespace dyncover
