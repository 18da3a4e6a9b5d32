#pragma once

#include <cstdint>
#include <string>

#include "dyncover/workload.hpp"

namespace dyncover {

enum class WeightDist { UniformInt, PowersOfTwo };

struct WorkloadConfig {
    Kind kind = Kind::Interval1D;
    bool weighted = false;
    size_t nInitial = 0;       // initial elements, split evenly between points and ranges
    size_t nOps = 0;           // updates, not counting snapshot markers
    size_t snapshotEvery = 0;  // 0 disables snapshots
    uint64_t seed = 1;
    WeightDist weightDist = WeightDist::UniformInt;
    int64_t maxWeight = 16;    // U: weights in [1, U]
    double meanLength = 0.05;  // mean interval length, as a fraction of the range
    double side = 4;           // unit-square point range is [0, side]^2
    double deleteBias = 0.4;   // probability that an update is a deletion
};

// Deterministic in the config. Deletions always target a live element.
Workload generate_workload(const WorkloadConfig& cfg);

// Moves a leading block of inserts that ends at the first snapshot into
// wl.initial, so the structure can be built on it in one go. The snapshot op
// stays. Returns the number of ops moved.
size_t split_initial(Workload& wl);

}  // namespace dyncover
