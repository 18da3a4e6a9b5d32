#include "dyncover/bench.hpp"

#include <chrono>
#include <algorithm>
#include <cmath>
#include <sstream>

namespace dyncover {

namespace {

int64_t now_ns() {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now().time_since_epoch()).count();
}

std::vector<Interval> intervals_of(const Instance& inst) {
    std::vector<Interval> out;
    for (auto& r : inst.range_list()) out.push_back(std::get<Interval>(r));
    return out;
}

}  // namespace

OracleKind parse_oracle(const std::string& name) {
    if (name == "none" || name.empty()) return OracleKind::None;
    if (name == "exact") return OracleKind::Exact;
    if (name == "brute") return OracleKind::Brute;
    if (name == "greedy") return OracleKind::Greedy;
    throw Error(ErrorCode::ConfigError, "unknown oracle '" + name + "'");
}

OracleResult run_oracle(const Instance& inst, OracleKind kind) {
    auto pts = inst.point_list();
    switch (kind) {
        case OracleKind::Exact:
            if (inst.kind == Kind::Interval1D)
                return inst.weighted ? exact_interval_weighted(pts, intervals_of(inst))
                                     : exact_interval_unweighted(pts, intervals_of(inst));
            return exact_bruteforce(pts, inst.range_list(), 16);
        case OracleKind::Brute: return exact_bruteforce(pts, inst.range_list(), 16);
        case OracleKind::Greedy: return greedy_baseline(pts, inst.range_list());
        case OracleKind::None: break;
    }
    throw Error(ErrorCode::ConfigError, "no oracle selected");
}

double ratio_bound(const std::string& kind, double eps) {
    if (kind == "interval-u") return 1 + eps;
    if (kind == "interval-w") return 3 + eps;
    if (kind == "quadrant-u") return 12;
    if (kind == "quadrant-w") return 8;
    if (kind == "unitsquare-u") return 4 * 12;
    if (kind == "unitsquare-w") return 4 * 8;
    throw Error(ErrorCode::ConfigError, "unknown structure kind '" + kind + "'");
}

RunResult run_workload(Workload wl, const RunOptions& opts) {
    RunResult res;
    split_initial(wl);
    int64_t t0 = now_ns();
    auto cover = make_cover(opts.structureKind, wl.initial, opts.params);
    res.buildNs = now_ns() - t0;
    bool exact = opts.oracle == OracleKind::Exact || opts.oracle == OracleKind::Brute;
    double bound = ratio_bound(opts.structureKind, opts.params.eps);
    double ratioSum = 0;
    size_t ratioCount = 0;

    for (const UpdateOp& op : wl.ops) {
        MetricsRecord rec;
        rec.opIndex = op.opIndex;
        rec.opKind = action_tag(op.action);
        uint64_t before = cover->rebuild_count();
        if (op.action == Action::Snapshot) {
            int64_t a = now_ns();
            bool feas = cover->feasible();
            double cost = cover->cost();
            size_t size = cover->size();
            rec.elapsedNs = now_ns() - a;
            rec.feasible = feas;
            rec.cost = cost;
            rec.size = size;
            res.snapshots++;
            auto violation = [&](const std::string& what) {
                res.violations.push_back("op " + std::to_string(op.opIndex) + ": " + what);
            };
            if (opts.checkSnapshots)
                if (std::string err = check_consistency(*cover); !err.empty()) violation(err);
            if (opts.oracle != OracleKind::None) {
                OracleResult o = run_oracle(cover->instance(), opts.oracle);
                if (o.feasible != feas) violation("feasibility differs from the oracle");
                if (o.feasible) {
                    rec.oracleCost = o.cost;
                    if (feas && o.cost > 0) {
                        double ratio = cost / o.cost;
                        rec.ratio = ratio;
                        res.maxRatio = std::max(res.maxRatio, ratio);
                        ratioSum += ratio;
                        ratioCount++;
                        if (exact && ratio < 1 - 1e-9) violation("cost below the exact optimum");
                        if (exact && ratio > bound * (1 + 1e-9)) violation("ratio " + format_double(ratio) + " above bound");
                    }
                }
            }
        } else {
            int64_t a = now_ns();
            cover->update(op);
            rec.elapsedNs = now_ns() - a;
            res.updates++;
        }
        res.totalNs += rec.elapsedNs;
        rec.rebuild = cover->rebuild_count() != before;
        res.records.push_back(std::move(rec));
    }
    res.rebuilds = cover->rebuild_count();
    res.meanRatio = ratioCount ? ratioSum / static_cast<double>(ratioCount) : 0;
    return res;
}

std::string csv_header() { return "opIndex,opKind,elapsedNs,cost,size,oracleCost,ratio,feasible,rebuild"; }

std::string csv_row(const MetricsRecord& r) {
    std::ostringstream out;
    auto num = [&](const std::optional<double>& v) {
        if (v) out << format_double(*v);
    };
    out << r.opIndex << ',' << r.opKind << ',' << r.elapsedNs << ',';
    num(r.cost);
    out << ',';
    if (r.size) out << *r.size;
    out << ',';
    num(r.oracleCost);
    out << ',';
    num(r.ratio);
    out << ',';
    if (r.feasible) out << (*r.feasible ? 1 : 0);
    out << ',' << (r.rebuild ? 1 : 0);
    return out.str();
}

std::vector<ScalingRow> run_scaling(const std::string& kind, const ApproxParams& params, WorkloadConfig cfg,
                                    const std::vector<size_t>& sizes, int reps) {
    std::vector<ScalingRow> rows;
    RunOptions opts;
    opts.structureKind = kind;
    opts.params = params;
    opts.checkSnapshots = false;
    for (size_t n : sizes) {
        ScalingRow row;
        row.n = n;
        row.ops = cfg.nOps;
        std::vector<double> perOp;
        for (int rep = 0; rep < std::max(1, reps); rep++) {
            WorkloadConfig c = cfg;
            c.nInitial = n;
            c.seed = cfg.seed + static_cast<uint64_t>(rep);
            RunResult r = run_workload(generate_workload(c), opts);
            perOp.push_back(static_cast<double>(r.totalNs) / static_cast<double>(std::max<size_t>(1, r.updates)));
            row.rebuilds += r.rebuilds;
        }
        std::sort(perOp.begin(), perOp.end());
        row.nsPerOp = perOp[perOp.size() / 2];
        if (!rows.empty()) row.growth = row.nsPerOp / rows.back().nsPerOp;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace dyncover
