#include "dyncover/instance.hpp"

#include <algorithm>
#include <cmath>

namespace dyncover {

const char* action_tag(Action a) {
    switch (a) {
        case Action::InsertPoint: return "+P";
        case Action::DeletePoint: return "-P";
        case Action::InsertRange: return "+R";
        case Action::DeleteRange: return "-R";
        case Action::Snapshot: return "Q";
    }
    return "?";
}

bool Instance::in_range(const Point& p) const {
    if (kind == Kind::Interval1D) return pointRange.x0 <= p.x && p.x <= pointRange.x1;
    return pointRange.contains(p);
}

size_t Instance::point_count() const {
    size_t n = 0;
    for (auto& [p, c] : points) n += c;
    return n;
}

size_t Instance::range_count() const {
    size_t n = 0;
    for (auto& [r, c] : ranges) n += c;
    return n;
}

std::vector<Point> Instance::point_list() const {
    std::vector<Point> out;
    for (auto& [p, c] : points)
        for (int64_t i = 0; i < c; i++) out.push_back(p);
    return out;
}

std::vector<Range> Instance::range_list() const {
    std::vector<Range> out;
    for (auto& [r, c] : ranges)
        for (int64_t i = 0; i < c; i++) out.push_back(r);
    return out;
}

void check_op(const Instance& inst, const UpdateOp& op) {
    switch (op.action) {
        case Action::InsertPoint:
        case Action::DeletePoint:
            if (!std::isfinite(op.point.x) || !std::isfinite(op.point.y) || !inst.in_range(op.point))
                throw Error(ErrorCode::OutOfRange, "point outside the point range");
            break;
        case Action::InsertRange:
        case Action::DeleteRange: {
            if (kind_of(op.range) != inst.kind) throw Error(ErrorCode::KindMismatch, "range kind differs from instance kind");
            double w = weight_of(op.range);
            if (!std::isfinite(w) || w <= 0) throw Error(ErrorCode::WeightOutOfRange, "weight must be positive");
            if (!inst.weighted && w != 1) throw Error(ErrorCode::WeightOutOfRange, "unweighted instance requires weight 1");
            if (auto* i = std::get_if<Interval>(&op.range); i && !(i->a <= i->b))
                throw Error(ErrorCode::OutOfRange, "interval with a > b");
            break;
        }
        case Action::Snapshot: break;
    }
}

void apply_update(Instance& inst, const UpdateOp& op) {
    check_op(inst, op);
    switch (op.action) {
        case Action::InsertPoint: inst.points[op.point]++; break;
        case Action::DeletePoint: {
            auto it = inst.points.find(op.point);
            if (it == inst.points.end()) throw Error(ErrorCode::DeleteMissing, "point not present");
            if (--it->second == 0) inst.points.erase(it);
            break;
        }
        case Action::InsertRange: inst.ranges[op.range]++; break;
        case Action::DeleteRange: {
            auto it = inst.ranges.find(op.range);
            if (it == inst.ranges.end()) throw Error(ErrorCode::DeleteMissing, "range not present");
            if (--it->second == 0) inst.ranges.erase(it);
            break;
        }
        case Action::Snapshot: break;
    }
}

bool is_cover_naive(const std::vector<Point>& points, const std::vector<Range>& ranges) {
    for (auto& p : points) {
        bool ok = false;
        for (auto& r : ranges)
            if (range_contains(r, p)) { ok = true; break; }
        if (!ok) return false;
    }
    return true;
}

namespace {

// Sorted by key with a running extreme of the second coordinate; answers
// "is there an element with key <= k whose value reaches v" by binary search.
struct PrefixReach {
    std::vector<std::pair<double, double>> kv;  // key, best value so far
    bool maximize = true;

    void build(std::vector<std::pair<double, double>> items, bool max) {
        maximize = max;
        std::sort(items.begin(), items.end());
        kv = std::move(items);
        for (size_t i = 1; i < kv.size(); i++)
            kv[i].second = maximize ? std::max(kv[i].second, kv[i - 1].second)
                                    : std::min(kv[i].second, kv[i - 1].second);
    }
    bool reaches(double key, double v) const {
        auto it = std::upper_bound(kv.begin(), kv.end(), std::make_pair(key, kInf));
        if (it == kv.begin()) return false;
        double best = std::prev(it)->second;
        return maximize ? best >= v : best <= v;
    }
};

}  // namespace

bool is_cover(const std::vector<Point>& points, const std::vector<Range>& ranges, Kind kind) {
    if (points.empty()) return true;
    if (kind == Kind::Interval1D) {
        std::vector<std::pair<double, double>> items;
        for (auto& r : ranges) {
            auto& i = std::get<Interval>(r);
            items.push_back({i.a, i.b});
        }
        PrefixReach pr;
        pr.build(std::move(items), true);
        for (auto& p : points)
            if (!pr.reaches(p.x, p.x)) return false;
        return true;
    }
    if (kind == Kind::Quadrant2D) {
        // Mirror every direction onto NE: covered iff some vertex is dominated by the point.
        PrefixReach pr[4];
        std::vector<std::pair<double, double>> items[4];
        for (auto& r : ranges) {
            auto& q = std::get<Quadrant>(r);
            int d = static_cast<int>(q.dir);
            items[d].push_back({faces_east(q.dir) ? q.vx : -q.vx, faces_north(q.dir) ? q.vy : -q.vy});
        }
        for (int d = 0; d < 4; d++) pr[d].build(std::move(items[d]), false);
        for (auto& p : points) {
            bool ok = false;
            for (int d = 0; d < 4 && !ok; d++) {
                Dir dir = static_cast<Dir>(d);
                double u = faces_east(dir) ? p.x : -p.x;
                double v = faces_north(dir) ? p.y : -p.y;
                ok = pr[d].reaches(u, v);
            }
            if (!ok) return false;
        }
        return true;
    }
    std::vector<UnitSquare> sq;
    for (auto& r : ranges) sq.push_back(std::get<UnitSquare>(r));
    std::sort(sq.begin(), sq.end(), [](auto& l, auto& r) { return l.cx < r.cx; });
    for (auto& p : points) {
        auto it = std::lower_bound(sq.begin(), sq.end(), p.x - 1, [](const UnitSquare& s, double v) { return s.cx < v; });
        bool ok = false;
        for (; it != sq.end() && it->cx <= p.x && !ok; ++it) ok = it->contains(p);
        if (!ok) return false;
    }
    return true;
}

}  // namespace dyncover
