#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "dyncover/bench.hpp"

using namespace dyncover;

namespace {

constexpr int kExitViolation = 2;
constexpr int kExitConfig = 3;

struct Options {
    std::string kind;
    bool weighted = false;
    double eps = 0.5;
    int r = 8;
    double deltaExp = 0.25;
    int64_t U = 1 << 20;
    size_t baseThreshold = 32;
    uint64_t seed = 1;
    size_t n = 1000;
    size_t ops = 5000;
    size_t snapshotEvery = 50;
    int64_t maxWeight = 16;
    std::string weights = "uniform";
    double meanLength = 0.05;
    double side = 4;
    double deleteBias = 0.4;
    std::string oracle;
    std::string out;
    std::string workload;
    std::vector<size_t> sizes{1024, 2048, 4096};
    int reps = 1;
};

bool is_structure_kind(const std::string& k) {
    return k.size() > 2 && (k.substr(k.size() - 2) == "-u" || k.substr(k.size() - 2) == "-w");
}

// Accepts a structure kind (interval-u) or a base kind (interval) plus --weighted.
WorkloadConfig workload_config(const Options& o) {
    WorkloadConfig cfg;
    std::string base = o.kind;
    cfg.weighted = o.weighted;
    if (is_structure_kind(o.kind)) {
        Kind k;
        structure_traits(o.kind, k, cfg.weighted);
        base = o.kind.substr(0, o.kind.size() - 2);
    }
    if (base == "interval") cfg.kind = Kind::Interval1D;
    else if (base == "quadrant") cfg.kind = Kind::Quadrant2D;
    else if (base == "unitsquare") cfg.kind = Kind::UnitSquare2D;
    else throw Error(ErrorCode::ConfigError, "unknown kind '" + o.kind + "'");
    if (o.weights == "uniform") cfg.weightDist = WeightDist::UniformInt;
    else if (o.weights == "pow2") cfg.weightDist = WeightDist::PowersOfTwo;
    else throw Error(ErrorCode::ConfigError, "unknown weight distribution '" + o.weights + "'");
    cfg.nInitial = o.n;
    cfg.nOps = o.ops;
    cfg.snapshotEvery = o.snapshotEvery;
    cfg.seed = o.seed;
    cfg.maxWeight = o.maxWeight;
    cfg.meanLength = o.meanLength;
    cfg.side = o.side;
    cfg.deleteBias = o.deleteBias;
    return cfg;
}

std::string structure_kind(const Options& o) {
    if (is_structure_kind(o.kind)) return o.kind;
    return o.kind + (o.weighted ? "-w" : "-u");
}

ApproxParams approx_params(const Options& o) {
    ApproxParams p;
    p.eps = o.eps;
    p.r = o.r;
    p.deltaExp = o.deltaExp;
    p.U = o.U;
    p.baseThreshold = o.baseThreshold;
    return p;
}

Workload load_workload(const Options& o) {
    if (o.workload.empty()) return generate_workload(workload_config(o));
    std::ifstream in(o.workload);
    if (!in) throw Error(ErrorCode::ConfigError, "cannot open workload '" + o.workload + "'");
    return parse_workload(in);
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(path);
    if (!f) throw Error(ErrorCode::ConfigError, "cannot write '" + path + "'");
    f << text;
}

std::string records_csv(const RunResult& r) {
    std::ostringstream out;
    out << csv_header() << '\n';
    for (auto& rec : r.records) out << csv_row(rec) << '\n';
    return out.str();
}

int report_violations(const RunResult& r) {
    for (auto& v : r.violations) std::cerr << "violation: " << v << '\n';
    return r.violations.empty() ? 0 : kExitViolation;
}

void add_structure_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--eps", o.eps, "Approximation slack");
    cmd->add_option("--r", o.r, "Portions per level");
    cmd->add_option("--delta-exp", o.deltaExp, "Weighted quadrant grid exponent");
    cmd->add_option("--u", o.U, "Weight bound for weighted quadrants and squares");
    cmd->add_option("--base-threshold", o.baseThreshold, "Nodes at most this size are solved directly");
}

void add_workload_flags(CLI::App* cmd, Options& o) {
    cmd->add_flag("--weighted", o.weighted, "Weighted ranges (with a base kind)");
    cmd->add_option("--seed", o.seed, "Generator seed");
    cmd->add_option("--n", o.n, "Initial inserts");
    cmd->add_option("--ops", o.ops, "Updates after the initial block");
    cmd->add_option("--snapshot-every", o.snapshotEvery, "Snapshot period in updates (0: none)");
    cmd->add_option("--max-weight", o.maxWeight, "Largest generated weight");
    cmd->add_option("--weights", o.weights, "Weight distribution: uniform or pow2");
    cmd->add_option("--mean-length", o.meanLength, "Mean interval length as a fraction of the range");
    cmd->add_option("--side", o.side, "Unit-square point range side");
    cmd->add_option("--delete-bias", o.deleteBias, "Probability that an update deletes");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dynamic geometric set cover: workloads, replay and measurements"};
    app.require_subcommand(1);
    Options o;

    auto* gen = app.add_subcommand("gen", "Generate a workload");
    gen->add_option("--kind", o.kind, "interval, quadrant or unitsquare (or a structure kind)")->required();
    add_workload_flags(gen, o);
    gen->add_option("--out", o.out, "Output file (default stdout)");

    auto* run = app.add_subcommand("run", "Replay a workload and write per-op metrics as CSV");
    auto* compare = app.add_subcommand("compare", "Replay a workload against an oracle and summarize ratios");
    for (auto* cmd : {run, compare}) {
        cmd->add_option("--kind", o.kind, "Structure kind, e.g. interval-u, quadrant-w")->required();
        cmd->add_option("--workload", o.workload, "Workload file (default: generate from the flags)");
        cmd->add_option("--oracle", o.oracle, "exact, brute or greedy");
        cmd->add_option("--out", o.out, "CSV output file (default stdout for run)");
        add_workload_flags(cmd, o);
        add_structure_flags(cmd, o);
    }

    auto* scaling = app.add_subcommand("scaling", "Amortized ns per update across initial sizes");
    scaling->add_option("--kind", o.kind, "Structure kind")->required();
    scaling->add_option("--sizes", o.sizes, "Initial sizes, ascending")->delimiter(',');
    scaling->add_option("--reps", o.reps, "Repetitions per size");
    scaling->add_option("--out", o.out, "CSV output file (default stdout)");
    add_workload_flags(scaling, o);
    add_structure_flags(scaling, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (gen->parsed()) {
            Workload wl = generate_workload(workload_config(o));
            write_text(o.out, serialize_workload(wl.initial, wl.ops));
            return 0;
        }
        if (run->parsed() || compare->parsed()) {
            RunOptions ro;
            ro.structureKind = structure_kind(o);
            ro.params = approx_params(o);
            ro.oracle = parse_oracle(compare->parsed() && o.oracle.empty() ? "exact" : o.oracle);
            RunResult r = run_workload(load_workload(o), ro);
            if (run->parsed()) {
                write_text(o.out, records_csv(r));
            } else {
                if (!o.out.empty()) write_text(o.out, records_csv(r));
                std::cout << "kind=" << ro.structureKind << " snapshots=" << r.snapshots
                          << " max_ratio=" << format_double(r.maxRatio) << " mean_ratio=" << format_double(r.meanRatio)
                          << " bound=" << format_double(ratio_bound(ro.structureKind, ro.params.eps)) << '\n';
            }
            return report_violations(r);
        }
        if (scaling->parsed()) {
            for (size_t i = 1; i < o.sizes.size(); i++)
                if (o.sizes[i] <= o.sizes[i - 1]) throw Error(ErrorCode::ConfigError, "sizes must be ascending");
            auto rows = run_scaling(structure_kind(o), approx_params(o), workload_config(o), o.sizes, o.reps);
            std::ostringstream out;
            out << "kind,n,ops,nsPerOp,growth,rebuilds\n";
            for (auto& row : rows)
                out << structure_kind(o) << ',' << row.n << ',' << row.ops << ',' << format_double(row.nsPerOp) << ','
                    << format_double(row.growth) << ',' << row.rebuilds << '\n';
            write_text(o.out, out.str());
            return 0;
        }
    } catch (const Error& e) {
        std::cerr << e.what() << '\n';
        return kExitConfig;
    }
    return 0;
}
