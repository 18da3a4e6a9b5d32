#include "dyncover/generate.hpp"

#include <cmath>
#include <random>

namespace dyncover {

namespace {

struct Gen {
    const WorkloadConfig& cfg;
    std::mt19937_64 rng;
    std::vector<Point> livePts;
    std::vector<Range> liveRanges;

    explicit Gen(const WorkloadConfig& c) : cfg(c), rng(c.seed) {}

    double uni(double lo, double hi) {
        double v = std::uniform_real_distribution<double>(lo, hi)(rng);
        return std::round(v * 1048576.0) / 1048576.0;  // 2^-20 grid
    }

    double weight() {
        if (!cfg.weighted) return 1;
        if (cfg.weightDist == WeightDist::UniformInt)
            return static_cast<double>(std::uniform_int_distribution<int64_t>(1, cfg.maxWeight)(rng));
        int top = static_cast<int>(std::floor(std::log2(static_cast<double>(cfg.maxWeight))));
        return std::ldexp(1.0, std::uniform_int_distribution<int>(0, top)(rng));
    }

    Point point() {
        switch (cfg.kind) {
            case Kind::Interval1D: return {uni(0, 1), 0};
            case Kind::Quadrant2D: return {uni(0, 1), uni(0, 1)};
            case Kind::UnitSquare2D: return {uni(0, cfg.side), uni(0, cfg.side)};
        }
        return {};
    }

    Range range() {
        switch (cfg.kind) {
            case Kind::Interval1D: {
                double len = std::exponential_distribution<double>(1 / cfg.meanLength)(rng);
                double c = uni(-0.05, 1.05);
                double a = std::round((c - len / 2) * 1048576.0) / 1048576.0;
                double b = std::round((c + len / 2) * 1048576.0) / 1048576.0;
                return Interval{a, b, weight()};
            }
            case Kind::Quadrant2D: {
                Dir d = static_cast<Dir>(std::uniform_int_distribution<int>(0, 3)(rng));
                return Quadrant{d, uni(-0.1, 1.1), uni(-0.1, 1.1), weight()};
            }
            case Kind::UnitSquare2D: return UnitSquare{uni(-1, cfg.side), uni(-1, cfg.side), weight()};
        }
        return Interval{};
    }

    template <class T>
    T take(std::vector<T>& v) {
        size_t k = std::uniform_int_distribution<size_t>(0, v.size() - 1)(rng);
        T out = v[k];
        v[k] = v.back();
        v.pop_back();
        return out;
    }

    UpdateOp insert(bool pointSide) {
        if (pointSide) {
            livePts.push_back(point());
            return UpdateOp::insert_point(livePts.back());
        }
        liveRanges.push_back(range());
        return UpdateOp::insert_range(liveRanges.back());
    }

    UpdateOp step() {
        bool pointSide = std::bernoulli_distribution(0.5)(rng);
        bool del = std::bernoulli_distribution(cfg.deleteBias)(rng);
        if (!del) return insert(pointSide);
        if (pointSide && livePts.empty()) pointSide = false;
        if (!pointSide && liveRanges.empty()) pointSide = true;
        if (pointSide && livePts.empty()) return insert(std::bernoulli_distribution(0.5)(rng));
        if (pointSide) return UpdateOp::delete_point(take(livePts));
        return UpdateOp::delete_range(take(liveRanges));
    }
};

}  // namespace

Workload generate_workload(const WorkloadConfig& cfg) {
    if (cfg.weighted && cfg.maxWeight < 1) throw Error(ErrorCode::ConfigError, "maximum weight must be at least 1");
    if (cfg.meanLength <= 0 || cfg.side <= 0) throw Error(ErrorCode::ConfigError, "geometry parameters must be positive");
    if (cfg.deleteBias < 0 || cfg.deleteBias > 1) throw Error(ErrorCode::ConfigError, "delete bias must lie in [0, 1]");
    Workload wl;
    wl.initial.kind = cfg.kind;
    wl.initial.weighted = cfg.weighted;
    if (cfg.kind == Kind::Interval1D) wl.initial.pointRange = {0, 1, 0, 0};
    else if (cfg.kind == Kind::Quadrant2D) wl.initial.pointRange = {0, 1, 0, 1};
    else wl.initial.pointRange = {0, cfg.side, 0, cfg.side};

    Gen g(cfg);
    for (size_t i = 0; i < cfg.nInitial; i++) wl.ops.push_back(g.insert(i % 2 == 0));
    if (cfg.nInitial > 0) wl.ops.push_back(UpdateOp::snapshot());
    for (size_t i = 0; i < cfg.nOps; i++) {
        wl.ops.push_back(g.step());
        if (cfg.snapshotEvery && (i + 1) % cfg.snapshotEvery == 0) wl.ops.push_back(UpdateOp::snapshot());
    }
    for (size_t i = 0; i < wl.ops.size(); i++) wl.ops[i].opIndex = i;
    return wl;
}

size_t split_initial(Workload& wl) {
    size_t k = 0;
    while (k < wl.ops.size() &&
           (wl.ops[k].action == Action::InsertPoint || wl.ops[k].action == Action::InsertRange))
        k++;
    if (k == 0 || k == wl.ops.size() || wl.ops[k].action != Action::Snapshot) return 0;
    for (size_t i = 0; i < k; i++) apply_update(wl.initial, wl.ops[i]);
    wl.ops.erase(wl.ops.begin(), wl.ops.begin() + k);
    return k;
}

}  // namespace dyncover
