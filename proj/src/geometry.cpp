#include "dyncover/geometry.hpp"

#include "dyncover/errors.hpp"

namespace dyncover {

const char* dir_name(Dir d) {
    switch (d) {
        case Dir::NE: return "NE";
        case Dir::NW: return "NW";
        case Dir::SE: return "SE";
        case Dir::SW: return "SW";
    }
    return "?";
}

bool parse_dir(const std::string& s, Dir& out) {
    if (s == "NE") out = Dir::NE;
    else if (s == "NW") out = Dir::NW;
    else if (s == "SE") out = Dir::SE;
    else if (s == "SW") out = Dir::SW;
    else return false;
    return true;
}

const char* error_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::DeleteMissing: return "DeleteMissing";
        case ErrorCode::OutOfRange: return "OutOfRange";
        case ErrorCode::KindMismatch: return "KindMismatch";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::TooLarge: return "TooLarge";
        case ErrorCode::WeightOutOfRange: return "WeightOutOfRange";
        case ErrorCode::ConfigError: return "ConfigError";
    }
    return "Error";
}

double weight_of(const Range& r) {
    return std::visit([](const auto& x) { return x.w; }, r);
}

Range with_weight(const Range& r, double w) {
    return std::visit([w](auto x) -> Range { x.w = w; return x; }, r);
}

bool range_contains(const Range& r, const Point& p) {
    if (auto* i = std::get_if<Interval>(&r)) return i->contains(p.x);
    if (auto* q = std::get_if<Quadrant>(&r)) return q->contains(p);
    return std::get<UnitSquare>(r).contains(p);
}

Kind kind_of(const Range& r) {
    switch (r.index()) {
        case 0: return Kind::Interval1D;
        case 1: return Kind::Quadrant2D;
        default: return Kind::UnitSquare2D;
    }
}

}  // namespace dyncover
