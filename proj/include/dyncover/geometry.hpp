#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <string>
#include <variant>

namespace dyncover {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Kind { Interval1D, Quadrant2D, UnitSquare2D };

enum class Dir : uint8_t { NE, NW, SE, SW };

const char* dir_name(Dir d);
bool parse_dir(const std::string& s, Dir& out);

inline bool faces_east(Dir d) { return d == Dir::NE || d == Dir::SE; }
inline bool faces_north(Dir d) { return d == Dir::NE || d == Dir::NW; }

struct Point {
    double x = 0;
    double y = 0;  // unused in 1D
    auto operator<=>(const Point&) const = default;
};

struct Interval {
    double a = 0;
    double b = 0;
    double w = 1;
    auto operator<=>(const Interval&) const = default;
    bool contains(double x) const { return a <= x && x <= b; }
    bool contains(double lo, double hi) const { return a <= lo && hi <= b; }
};

struct Quadrant {
    Dir dir = Dir::NE;
    double vx = 0;
    double vy = 0;
    double w = 1;
    auto operator<=>(const Quadrant&) const = default;

    bool contains_x(double u) const { return faces_east(dir) ? u >= vx : u <= vx; }
    bool contains_y(double v) const { return faces_north(dir) ? v >= vy : v <= vy; }
    bool contains(double u, double v) const { return contains_x(u) && contains_y(v); }
    bool contains(const Point& p) const { return contains(p.x, p.y); }
};

struct UnitSquare {
    double cx = 0;
    double cy = 0;
    double w = 1;
    auto operator<=>(const UnitSquare&) const = default;
    bool contains(const Point& p) const {
        return cx <= p.x && p.x <= cx + 1 && cy <= p.y && p.y <= cy + 1;
    }
};

// Closed axis-parallel rectangle; may be degenerate.
struct Rect {
    double x0 = 0, x1 = 0, y0 = 0, y1 = 0;
    auto operator<=>(const Rect&) const = default;
    bool contains(double u, double v) const { return x0 <= u && u <= x1 && y0 <= v && v <= y1; }
    bool contains(const Point& p) const { return contains(p.x, p.y); }
    bool empty() const { return x0 > x1 || y0 > y1; }
};

// A quadrant contains a closed rectangle iff it contains the corner opposite its vertex side.
inline bool contains_rect(const Quadrant& q, const Rect& r) {
    double u = faces_east(q.dir) ? r.x0 : r.x1;
    double v = faces_north(q.dir) ? r.y0 : r.y1;
    return q.contains(u, v);
}

inline bool intersects_rect(const Quadrant& q, const Rect& r) {
    double u = faces_east(q.dir) ? r.x1 : r.x0;
    double v = faces_north(q.dir) ? r.y1 : r.y0;
    return q.contains(u, v);
}

using Range = std::variant<Interval, Quadrant, UnitSquare>;

double weight_of(const Range& r);
Range with_weight(const Range& r, double w);
bool range_contains(const Range& r, const Point& p);
Kind kind_of(const Range& r);

}  // namespace dyncover
