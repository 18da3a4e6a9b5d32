#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "dyncover/errors.hpp"
#include "dyncover/geometry.hpp"

namespace dyncover {

// Dynamic multiset of intervals; query(x) returns an interval with a <= x and
// maximum b (ties: smaller a, then smaller w). Treap keyed by (a, b, w) with
// subtree maxima.
class StabbingMaxMap {
public:
    StabbingMaxMap();
    void insert(const Interval& iv);
    void erase(const Interval& iv);  // DeleteMissing if absent
    std::optional<Interval> query(double x) const;
    size_t size() const { return size_; }
    void clear();

private:
    struct Node {
        Interval key;
        int count = 0;
        uint32_t prio = 0;
        int left = -1, right = -1;
        int best = -1;  // node index of the best element in this subtree
    };
    std::vector<Node> nodes_;
    std::vector<int> free_;
    int root_ = -1;
    size_t size_ = 0;
    std::mt19937 rng_{12345};

    bool better(int a, int b) const;
    void pull(int t);
    int rotate_right(int t);
    int rotate_left(int t);
    int insert_at(int t, const Interval& iv);
    int erase_at(int t, const Interval& iv, bool& found);
};

// Dynamic multiset of weighted planar points with rectangle queries returning
// the extreme-weight point. Ties are broken by the lexicographically smallest
// (x, y), then by insertion handle. Static kd-trees combined with the
// logarithmic method; deletions are lazy with periodic compaction.
class RangeMinMax2D {
public:
    enum class Mode { MinWeight, MaxWeight };

    struct Entry {
        double x = 0, y = 0, w = 0;
        uint64_t tag = 0;     // caller payload
        uint64_t handle = 0;  // identity inside this structure
    };

    explicit RangeMinMax2D(Mode mode = Mode::MinWeight) : mode_(mode) {}

    uint64_t insert(double x, double y, double w, uint64_t tag = 0);
    void erase(uint64_t handle);  // DeleteMissing if absent
    std::optional<Entry> query(const Rect& r) const;
    size_t size() const { return alive_; }
    void clear();
    Mode mode() const { return mode_; }

private:
    struct Tree {
        std::vector<Entry> pts;
        std::vector<char> alive;
        std::vector<Rect> box;  // subtree bounding box at node position
        std::vector<int> best;  // best alive position in subtree, -1 if none
        size_t aliveCount = 0;
    };

    Mode mode_;
    std::vector<Tree> levels_;  // level k holds 0 or about 2^k points
    std::unordered_map<uint64_t, std::pair<int, int>> where_;
    uint64_t nextHandle_ = 1;
    size_t alive_ = 0;
    size_t dead_ = 0;

    bool better(const Entry& a, const Entry& b) const;
    void build(Tree& t, std::vector<Entry> pts);
    int build_rec(Tree& t, int lo, int hi, int depth);
    int pick(const Tree& t, int a, int b) const;
    void refresh_path(Tree& t, int pos);
    void query_rec(const Tree& t, int lo, int hi, const Rect& r, const Entry*& best) const;
    void compact();
};

// Containment lookup: a stored interval containing [lo, hi], or a stored
// quadrant containing a rectangle; minimum weight, ties by smallest element.
class IntervalContainmentIndex {
public:
    void insert(const Interval& iv);
    void erase(const Interval& iv);
    std::optional<Interval> query(double lo, double hi) const;
    size_t size() const { return rm_.size(); }

private:
    RangeMinMax2D rm_{RangeMinMax2D::Mode::MinWeight};
    std::multimap<Interval, uint64_t> handles_;
};

class QuadrantContainmentIndex {
public:
    void insert(const Quadrant& q);
    void erase(const Quadrant& q);
    std::optional<Quadrant> query(const Rect& r) const;
    size_t size() const { return count_; }

private:
    RangeMinMax2D rm_[4];
    std::multimap<Quadrant, uint64_t> handles_;
    size_t count_ = 0;
};

enum class Side { Left, Right, Top, Bottom };

// Maximal quadrant that left/right/top/bottom intersects a rectangle R:
// it contains the named side of R but not R, and its vertex is the most
// extreme among such quadrants (rightmost for Left, leftmost for Right,
// lowest for Top, highest for Bottom).
class QuadrantDominanceIndex {
public:
    void insert(const Quadrant& q);
    void erase(const Quadrant& q);
    std::optional<Quadrant> query(const Rect& r, Side side) const;
    size_t size() const { return count_; }

private:
    // [dir][0] keyed on vx, [dir][1] keyed on vy.
    RangeMinMax2D rm_[4][2] = {
        {RangeMinMax2D(RangeMinMax2D::Mode::MinWeight), RangeMinMax2D(RangeMinMax2D::Mode::MinWeight)},
        {RangeMinMax2D(RangeMinMax2D::Mode::MaxWeight), RangeMinMax2D(RangeMinMax2D::Mode::MinWeight)},
        {RangeMinMax2D(RangeMinMax2D::Mode::MinWeight), RangeMinMax2D(RangeMinMax2D::Mode::MaxWeight)},
        {RangeMinMax2D(RangeMinMax2D::Mode::MaxWeight), RangeMinMax2D(RangeMinMax2D::Mode::MaxWeight)},
    };
    std::multimap<Quadrant, std::tuple<uint64_t, uint64_t, uint64_t>> handles_;  // hx, hy, tag
    std::unordered_map<uint64_t, Quadrant> byTag_;
    uint64_t nextTag_ = 1;
    size_t count_ = 0;
};

// Naive reference answers used by tests.
std::optional<Quadrant> dominance_scan(const std::vector<Quadrant>& qs, const Rect& r, Side side);
bool intersects_side(const Quadrant& q, const Rect& r, Side side);

// Frozen sorted cut arrays; cells are half-open except the last, which is closed.
class GridLocator {
public:
    GridLocator() = default;
    explicit GridLocator(std::vector<double> xs, std::vector<double> ys = {});
    int locate_x(double x) const { return locate(xs_, x); }
    int locate_y(double y) const { return locate(ys_, y); }
    std::pair<int, int> locate(const Point& p) const { return {locate_y(p.y), locate_x(p.x)}; }
    const std::vector<double>& xs() const { return xs_; }
    const std::vector<double>& ys() const { return ys_; }
    int cols() const { return xs_.empty() ? 0 : static_cast<int>(xs_.size()) - 1; }
    int rows() const { return ys_.empty() ? 0 : static_cast<int>(ys_.size()) - 1; }

    static int locate(const std::vector<double>& cuts, double v);

private:
    std::vector<double> xs_, ys_;
};

}  // namespace dyncover
