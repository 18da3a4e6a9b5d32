#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "dyncover/errors.hpp"
#include "dyncover/geometry.hpp"

namespace dyncover {

enum class Action { InsertPoint, DeletePoint, InsertRange, DeleteRange, Snapshot };

struct UpdateOp {
    Action action = Action::Snapshot;
    Point point;
    Range range;
    uint64_t opIndex = 0;

    static UpdateOp insert_point(Point p) { return {Action::InsertPoint, p, Interval{}, 0}; }
    static UpdateOp delete_point(Point p) { return {Action::DeletePoint, p, Interval{}, 0}; }
    static UpdateOp insert_range(Range r) { return {Action::InsertRange, {}, r, 0}; }
    static UpdateOp delete_range(Range r) { return {Action::DeleteRange, {}, r, 0}; }
    static UpdateOp snapshot() { return {Action::Snapshot, {}, Interval{}, 0}; }

    bool operator==(const UpdateOp&) const = default;
};

const char* action_tag(Action a);

// Multiset of points and ranges over a declared point range. For 1D instances
// the range is [x0, x1] and y-coordinates are ignored.
struct Instance {
    Kind kind = Kind::Interval1D;
    bool weighted = false;
    Rect pointRange{0, 1, 0, 1};
    std::map<Point, int64_t> points;
    std::map<Range, int64_t> ranges;

    bool in_range(const Point& p) const;
    size_t point_count() const;
    size_t range_count() const;
    size_t size() const { return point_count() + range_count(); }

    std::vector<Point> point_list() const;
    std::vector<Range> range_list() const;

    bool operator==(const Instance&) const = default;
};

// Validation shared by the structures: throws OutOfRange / KindMismatch / WeightOutOfRange.
void check_op(const Instance& inst, const UpdateOp& op);

// Mutates the instance; Snapshot leaves it unchanged.
void apply_update(Instance& inst, const UpdateOp& op);

bool is_cover(const std::vector<Point>& points, const std::vector<Range>& ranges, Kind kind);

// Per-point scan over all ranges; reference for is_cover.
bool is_cover_naive(const std::vector<Point>& points, const std::vector<Range>& ranges);

}  // namespace dyncover
