#include "dyncover/cover.hpp"

#include <cmath>
#include <map>

#include "dyncover/interval_unweighted.hpp"
#include "dyncover/interval_weighted.hpp"
#include "dyncover/quadrant_unweighted.hpp"
#include "dyncover/quadrant_weighted.hpp"
#include "dyncover/unitsquare.hpp"

namespace dyncover {

void structure_traits(const std::string& kind, Kind& instKind, bool& weighted) {
    if (kind == "interval-u") instKind = Kind::Interval1D, weighted = false;
    else if (kind == "interval-w") instKind = Kind::Interval1D, weighted = true;
    else if (kind == "quadrant-u") instKind = Kind::Quadrant2D, weighted = false;
    else if (kind == "quadrant-w") instKind = Kind::Quadrant2D, weighted = true;
    else if (kind == "unitsquare-u") instKind = Kind::UnitSquare2D, weighted = false;
    else if (kind == "unitsquare-w") instKind = Kind::UnitSquare2D, weighted = true;
    else throw Error(ErrorCode::ConfigError, "unknown structure kind '" + kind + "'");
}

std::unique_ptr<DynamicCover> make_cover(const std::string& kind, const Instance& inst, const ApproxParams& params) {
    Kind k;
    bool weighted;
    structure_traits(kind, k, weighted);
    if (inst.kind != k || inst.weighted != weighted)
        throw Error(ErrorCode::KindMismatch, "workload does not match structure kind '" + kind + "'");
    if (kind == "interval-u") return std::make_unique<IntervalCoverU>(inst, params);
    if (kind == "interval-w") return std::make_unique<IntervalCoverW>(inst, params);
    if (kind == "quadrant-u") return std::make_unique<QuadrantCoverU>(inst, params);
    if (kind == "quadrant-w") return std::make_unique<QuadrantCoverW>(inst, params);
    if (kind == "unitsquare-u" || kind == "unitsquare-w") return std::make_unique<UnitSquareCover>(inst, params);
    throw Error(ErrorCode::ConfigError, "structure kind '" + kind + "' is not available");
}

std::string check_consistency(DynamicCover& cover) {
    const Instance& inst = cover.instance();
    std::vector<Range> rep = cover.report();
    bool feas = cover.feasible();
    if (!feas) return rep.empty() ? "" : "infeasible but report is non-empty";
    if (rep.size() != cover.size()) return "size differs from report length";
    double total = 0;
    std::map<Range, int64_t> counts;
    for (auto& r : rep) {
        total += weight_of(r);
        counts[r]++;
        if (!inst.ranges.count(r)) return "report holds a range that is not in the instance";
    }
    if (std::abs(total - cover.cost()) > 1e-9 * std::max(1.0, total)) return "cost differs from report weight";
    if (!is_cover(inst.point_list(), rep, inst.kind)) return "report is not a cover";
    for (auto& [r, c] : counts)
        if (cover.multiplicity(r) != c) return "multiplicity disagrees with report";
    for (auto& [r, c] : inst.ranges)
        if (!counts.count(r) && cover.multiplicity(r) != 0) return "multiplicity of an unreported range is non-zero";
    return "";
}

}  // namespace dyncover
