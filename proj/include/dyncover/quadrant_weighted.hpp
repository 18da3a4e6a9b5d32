#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "dyncover/cover.hpp"
#include "dyncover/quadrant_unweighted.hpp"

namespace dyncover {

// Weight bucket of a positive integer weight: k with 2^(k-1) <= w < 2^k.
int weight_bucket(double w);

// Dynamic O(1)-approximate weighted quadrant set cover answering rectangle
// queries. A node splits its region into r rows and r columns, each with a
// recursive sub-structure over the points in it and the quadrants whose vertex
// lies in it. Quadrants with the vertex outside a region are represented by at
// most four maximal ones per weight bucket. Every grid-aligned rectangle keeps
// the value of a four-staircase DP that sweeps the columns, pays for long
// quadrant parts aligned with grid lines, and asks the column sub-structure for
// the band left uncovered. A query guesses the weight bucket of the heaviest
// trivial quadrant, removes the union of the bucket's maximal quadrants and
// splits the rest into one grid-aligned rectangle and up to four strips.
class QuadrantCoverW : public DynamicCover {
public:
    QuadrantCoverW(const Instance& inst, const ApproxParams& params);
    ~QuadrantCoverW() override;

    void update(const UpdateOp& op) override;
    bool feasible() override;
    double cost() override;
    size_t size() override;
    int64_t multiplicity(const Range& r) override;
    std::vector<Range> report() override;

    const Instance& instance() const override { return inst_; }
    const CoverStats& stats() const override { return stats_; }

    // Cost of covering the points inside t (closed); kInf when impossible.
    double query_rect(const Rect& t);
    std::vector<Range> report_rect(const Rect& t);

    // Introspection for tests. Rows are indexed by y, columns by x.
    int grid_side() const;  // r used for the grid, 0 at a leaf root
    int epoch_divisor() const { return r_; }  // root rebuild after nEpoch / r updates
    int rows() const;
    int cols() const;
    const std::vector<double>& xcuts() const;
    const std::vector<double>& ycuts() const;
    int buckets() const;
    // Maximal trivial quadrants of bucket k for the root (axis -1), row index
    // (axis 0) or column index (axis 1).
    std::vector<Quadrant> maximal_trivial(int axis, int index, int k) const;
    double grid_rect_cost(int i, int j, int k, int l);  // cached table value
    double dp_grid_rect(int i, int j, int k, int l);    // fresh DP run
    std::vector<Range> dp_grid_rect_report(int i, int j, int k, int l);

    // One DP sweep for rows i..k starting at column j. Staircases are ordered
    // NW, SW, NE, SE; candidate 0 of each is the null element.
    struct DpTrace {
        std::array<std::vector<Quadrant>, 4> cands;
        std::array<size_t, 4> dims{};
        std::vector<std::vector<double>> f;        // per column j.., dense over states
        std::vector<std::vector<double>> colCost;  // kInf where the state is not valid
        size_t state(const std::array<size_t, 4>& idx) const {
            return ((idx[0] * dims[1] + idx[1]) * dims[2] + idx[2]) * dims[3] + idx[3];
        }
        double weight(int d, size_t idx) const { return idx == 0 ? 0 : cands[d][idx].w; }
    };
    DpTrace dp_trace(int i, int k, int j);

    uint64_t fingerprint() const;

    struct Node;

private:
    Instance inst_;
    ApproxParams params_;
    CoverStats stats_;
    int r_ = 2;
    std::unique_ptr<Node> root_;
    std::optional<std::vector<Range>> reported_;

    void check_weight(const Range& r) const;
    void build_root();
};

}  // namespace dyncover
