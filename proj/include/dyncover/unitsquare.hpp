#pragma once

#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "dyncover/cover.hpp"

namespace dyncover {

// Unit-square set cover through per-cell quadrant structures. The point range
// is cut into unit cells anchored at its lower-left corner (half-open, the
// last row and column closed and clipped to the range). Inside a cell a unit
// square agrees with one quadrant, so each square becomes at most four derived
// quadrants, one per cell it meets. The global solution is the union of the
// cell solutions mapped back to their squares.
class UnitSquareCover : public DynamicCover {
public:
    using Cell = std::pair<int64_t, int64_t>;

    UnitSquareCover(const Instance& inst, const ApproxParams& params);
    ~UnitSquareCover() override;

    void update(const UpdateOp& op) override;
    bool feasible() override;
    double cost() override;
    size_t size() override;
    int64_t multiplicity(const Range& r) override;
    std::vector<Range> report() override;

    const Instance& instance() const override { return inst_; }
    const CoverStats& stats() const override;

    // Cell holding p; points on the outer right or top edge go to the last cell.
    Cell cell_of(const Point& p) const;
    Rect cell_rect(const Cell& c) const;
    // Cells whose points the square can contain.
    std::vector<Cell> cells_of(const UnitSquare& s) const;
    // Quadrant that agrees with s on the points of cell c.
    Quadrant derived(const UnitSquare& s, const Cell& c) const;
    size_t live_cells() const { return cells_.size(); }

private:
    struct CellState {
        std::unique_ptr<DynamicCover> cover;
        std::map<Quadrant, std::map<UnitSquare, int64_t>> source;
    };

    Instance inst_;
    ApproxParams params_;
    int64_t nx_ = 1, ny_ = 1;
    std::map<Cell, CellState> cells_;
    CoverStats retired_;  // counters of cells dropped when they emptied
    mutable CoverStats stats_;

    CellState& cell(const Cell& c);
    void drop_if_empty(const Cell& c);
    void apply(const UpdateOp& op);
};

}  // namespace dyncover
