#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dyncover/cover.hpp"
#include "dyncover/generate.hpp"
#include "dyncover/oracle.hpp"
#include "dyncover/workload.hpp"

namespace dyncover {

enum class OracleKind { None, Exact, Brute, Greedy };

// Throws ConfigError on unknown names.
OracleKind parse_oracle(const std::string& name);

// Exact solves intervals with the sweep/DP oracles and 2D kinds by brute force
// (TooLarge above 16 distinct ranges). Greedy is an upper bound only.
OracleResult run_oracle(const Instance& inst, OracleKind kind);

// Frozen ratio bound of a structure kind against an exact optimum.
double ratio_bound(const std::string& structureKind, double eps);

// One CSV row. Cost, size and feasibility are filled at snapshots only; the
// oracle columns only when an oracle ran.
struct MetricsRecord {
    uint64_t opIndex = 0;
    std::string opKind;
    int64_t elapsedNs = 0;
    std::optional<double> cost;
    std::optional<size_t> size;
    std::optional<double> oracleCost;
    std::optional<double> ratio;
    std::optional<bool> feasible;
    bool rebuild = false;
};

struct RunOptions {
    std::string structureKind;
    ApproxParams params;
    OracleKind oracle = OracleKind::None;
    bool checkSnapshots = true;  // check_consistency at every snapshot
};

struct RunResult {
    std::vector<MetricsRecord> records;
    std::vector<std::string> violations;
    size_t snapshots = 0;
    size_t updates = 0;
    int64_t totalNs = 0;  // updates plus snapshot queries, excluding the initial build
    int64_t buildNs = 0;
    uint64_t rebuilds = 0;
    double maxRatio = 0;
    double meanRatio = 0;
};

// Builds the structure on the leading insert block and replays the rest.
RunResult run_workload(Workload wl, const RunOptions& opts);

std::string csv_header();
std::string csv_row(const MetricsRecord& r);

struct ScalingRow {
    size_t n = 0;
    size_t ops = 0;
    double nsPerOp = 0;  // median over repetitions
    double growth = 0;   // against the previous size; 0 on the first row
    uint64_t rebuilds = 0;
};

// Amortized time per update (snapshot queries included) for each initial size.
std::vector<ScalingRow> run_scaling(const std::string& structureKind, const ApproxParams& params, WorkloadConfig cfg,
                                    const std::vector<size_t>& sizes, int reps);

}  // namespace dyncover
