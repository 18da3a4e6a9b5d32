#pragma once

#include <algorithm>
#include <cmath>

#include "dyncover/cover.hpp"
#include "dyncover/support.hpp"

namespace dyncover::detail {

inline constexpr Side kSides[4] = {Side::Left, Side::Right, Side::Top, Side::Bottom};

// Same order as the dominance index: further into the rectangle, then smaller.
inline bool more_extreme(const Quadrant& a, const Quadrant& b, Side side) {
    auto ext = [side](const Quadrant& q) {
        switch (side) {
            case Side::Left: return q.vx;
            case Side::Right: return -q.vx;
            case Side::Top: return -q.vy;
            case Side::Bottom: return q.vy;
        }
        return 0.0;
    };
    double ea = ext(a), eb = ext(b);
    return ea > eb || (ea == eb && a < b);
}

// Uncapped grid side; also the epoch divisor.
inline int quadrant_epoch_divisor(size_t n, const ApproxParams& params) {
    if (params.gridR > 0) return params.gridR;
    double lg = std::log2(static_cast<double>(std::max<size_t>(n, 2)));
    return std::max(4, static_cast<int>(std::ceil(std::pow(2.0, std::sqrt(lg) / 2))));
}

}  // namespace dyncover::detail
