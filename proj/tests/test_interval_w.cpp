#include <doctest.h>

#include <random>

#include "dyncover/generate.hpp"
#include "dyncover/interval_weighted.hpp"
#include "dyncover/oracle.hpp"
#include "helpers.hpp"

using namespace dyncover;
using testutil::rand_int;

namespace {

Instance weighted_instance() {
    Instance inst;
    inst.weighted = true;
    inst.pointRange = {0, 1, 0, 0};
    return inst;
}

std::vector<Interval> intervals_of(const Instance& inst) {
    std::vector<Interval> out;
    for (auto& r : inst.range_list()) out.push_back(std::get<Interval>(r));
    return out;
}

OracleResult oracle(const Instance& inst) { return exact_interval_weighted(inst.point_list(), intervals_of(inst)); }

Instance random_instance(std::mt19937_64& rng, int np, int ni, double maxLen, int maxW) {
    Instance inst = weighted_instance();
    for (int i = 0; i < np; i++) apply_update(inst, UpdateOp::insert_point({testutil::dyadic(rng, 0, 1, 12)}));
    for (int i = 0; i < ni; i++)
        apply_update(inst, UpdateOp::insert_range(testutil::rand_interval(rng, 0, 1, maxLen, rand_int(rng, 1, maxW), 12)));
    return inst;
}

// Minimum over every choice of catalog subset; uncovered portions pay their short cost.
double exhaustive_decomposition(int pL, int pR, const std::vector<double>& shortCost, const std::vector<LongEntry>& longs) {
    double best = kInf;
    for (uint64_t mask = 0; mask < (uint64_t{1} << longs.size()); mask++) {
        double cost = 0;
        for (size_t e = 0; e < longs.size(); e++)
            if (mask >> e & 1) cost += longs[e].w;
        for (int i = pL; i <= pR; i++) {
            bool covered = false;
            for (size_t e = 0; e < longs.size(); e++)
                if ((mask >> e & 1) && longs[e].s <= i && i < longs[e].t) covered = true;
            if (!covered) cost += shortCost[i];
        }
        best = std::min(best, cost);
    }
    return best;
}

}  // namespace

TEST_CASE("dp over portions examples") {
    std::vector<double> shorts{1, 1, 1};
    CHECK(dp_over_portions(0, 2, shorts, {{0, 3, 2.5}}).cost == 2.5);
    CHECK(dp_over_portions(0, 2, shorts, {{0, 3, 1}}).cost == 1);
    CHECK(dp_over_portions(0, 2, shorts, {}).cost == 3);
    auto r = dp_over_portions(0, 2, {1, kInf, 1}, {{1, 2, 4}});
    CHECK(r.cost == 6);
    CHECK(r.longsUsed == std::vector<int>{0});
    CHECK(r.shortUsed == std::vector<int>{0, 2});
    CHECK(dp_over_portions(0, 2, {1, kInf, 1}, {}).cost == kInf);
}

TEST_CASE("dp equals exhaustive decomposition for up to five portions") {
    std::mt19937_64 rng(41);
    for (int iter = 0; iter < 500; iter++) {
        int k = rand_int(rng, 1, 5);
        std::vector<double> shorts(k);
        for (auto& s : shorts) s = rand_int(rng, 0, 9) == 0 ? kInf : rand_int(rng, 0, 20);
        std::vector<LongEntry> longs;
        for (int s = 0; s <= k; s++)
            for (int t = s + 1; t <= k; t++)
                if (rand_int(rng, 0, 2) == 0) longs.push_back({s, t, static_cast<double>(rand_int(rng, 1, 30))});
        int pL = rand_int(rng, 0, k - 1), pR = rand_int(rng, pL, k - 1);
        auto dp = dp_over_portions(pL, pR, shorts, longs);
        CHECK(dp.cost == exhaustive_decomposition(pL, pR, shorts, longs));
        if (dp.cost < kInf) {
            double rebuilt = 0;
            for (int e : dp.longsUsed) rebuilt += longs[e].w;
            for (int i : dp.shortUsed) rebuilt += shorts[i];
            CHECK(rebuilt == dp.cost);
        }
    }
}

TEST_CASE("weighted interval examples") {
    Instance inst = weighted_instance();
    IntervalCoverW empty(inst, {});
    CHECK(empty.feasible());
    CHECK(empty.cost() == 0);

    apply_update(inst, UpdateOp::insert_point({0.5}));
    apply_update(inst, UpdateOp::insert_range(Interval{0, 1, 5}));
    apply_update(inst, UpdateOp::insert_range(Interval{0.4, 0.6, 2}));
    IntervalCoverW one(inst, {});
    CHECK(one.cost() <= 3.5 * 2);
    CHECK(check_consistency(one).empty());

    one.update(UpdateOp::insert_range(Interval{0.45, 0.55, 1}));
    CHECK(one.cost() <= 1);
    one.update(UpdateOp::delete_range(Interval{0, 1, 5}));
    CHECK(one.cost() <= 1);
    one.update(UpdateOp::delete_range(Interval{0.45, 0.55, 1}));
    one.update(UpdateOp::delete_range(Interval{0.4, 0.6, 2}));
    CHECK_FALSE(one.feasible());
    CHECK(one.report().empty());
}

TEST_CASE("static random instances within 3+eps") {
    std::mt19937_64 rng(42);
    for (int iter = 0; iter < 20; iter++) {
        Instance inst = random_instance(rng, 150, 200, 0.15, 16);
        ApproxParams p;
        p.eps = 0.5;
        IntervalCoverW cover(inst, p);
        auto want = oracle(inst);
        REQUIRE(cover.feasible() == want.feasible);
        if (want.feasible) CHECK(cover.cost() <= 3.5 * want.cost);
        CHECK(check_consistency(cover).empty());
    }
}

TEST_CASE("opt estimate is an upper bound with a polynomial envelope") {
    std::mt19937_64 rng(43);
    double worst = 1;
    for (int iter = 0; iter < 300; iter++) {
        int n = rand_int(rng, 20, 200);
        Instance inst = random_instance(rng, n, n, 0.2, 16);
        IntervalCoverW cover(inst, {});
        auto want = oracle(inst);
        if (!want.feasible) {
            CHECK(cover.opt_estimate() == kInf);
            continue;
        }
        double est = cover.opt_estimate();
        CHECK(est >= want.cost);
        worst = std::max(worst, std::log(est / want.cost) / std::log(static_cast<double>(inst.size())));
    }
    // Envelope exponent observed on these sizes; regression bound.
    CHECK(worst <= 1.0);
}

TEST_CASE("bucket coverage of one-sided intervals") {
    std::mt19937_64 rng(44);
    for (int iter = 0; iter < 30; iter++) {
        Instance inst = random_instance(rng, 120, 160, 0.3, 64);
        ApproxParams p;
        p.eps = 0.5;
        IntervalCoverW cover(inst, p);
        if (cover.portions() == 0 || !cover.feasible()) continue;
        double est = cover.opt_estimate(), d1 = cover.delta1(), tilde = cover.child_eps();
        auto Ls = cover.left_candidates(), Rs = cover.right_candidates();
        for (auto& iv : intervals_of(inst)) {
            if (iv.w > (3 + p.eps) * est) continue;
            if (iv.a < 0) {
                bool ok = false;
                for (auto& c : Ls) ok |= c.b >= std::min(iv.b, 1.0) && c.w <= (1 + tilde / 2) * iv.w + d1;
                CHECK(ok);
            }
            if (iv.b > 1) {
                bool ok = false;
                for (auto& c : Rs) ok |= c.a <= std::max(iv.a, 0.0) && c.w <= (1 + tilde / 2) * iv.w + d1;
                CHECK(ok);
            }
        }
    }
}

TEST_CASE("cost is bounded by the (1+eps/2, 3+eps)-cost of the optimal witness") {
    std::mt19937_64 rng(45);
    for (double eps : {0.25, 0.5, 1.0}) {
        for (int iter = 0; iter < 30; iter++) {
            Instance inst = random_instance(rng, 100, 140, 0.25, 16);
            ApproxParams p;
            p.eps = eps;
            IntervalCoverW cover(inst, p);
            auto want = oracle(inst);
            if (!want.feasible) continue;
            double oneSided = 0, twoSided = 0;
            for (auto& r : want.witness) {
                auto& iv = std::get<Interval>(r);
                (iv.a < 0 || iv.b > 1 ? oneSided : twoSided) += iv.w;
            }
            CHECK(cover.cost() <= (1 + eps / 2) * oneSided + (3 + eps) * twoSided + 1e-9);
        }
    }
}

TEST_CASE("solving leaves every stored instance untouched") {
    std::mt19937_64 rng(46);
    Instance inst = random_instance(rng, 200, 250, 0.2, 16);
    IntervalCoverW cover(inst, {});
    uint64_t before = cover.fingerprint();
    cover.cost();
    cover.report();
    CHECK(cover.fingerprint() == before);
    IntervalCoverW fresh(cover.instance(), {});
    CHECK(fresh.fingerprint() == before);
}

TEST_CASE("weighted random streams: ratio, consistency and rebuild schedule") {
    for (double eps : {0.25, 0.5, 1.0}) {
        WorkloadConfig cfg;
        cfg.weighted = true;
        cfg.nInitial = 400;
        cfg.nOps = 600;
        cfg.snapshotEvery = 50;
        cfg.seed = static_cast<uint64_t>(eps * 1000);
        cfg.meanLength = 0.05;
        Workload wl = generate_workload(cfg);
        split_initial(wl);
        ApproxParams p;
        p.eps = eps;
        IntervalCoverW cover(wl.initial, p);
        size_t nEpoch = wl.initial.size(), counter = 0;
        uint64_t expected = 0;
        for (auto& op : wl.ops) {
            cover.update(op);
            if (op.action != Action::Snapshot) {
                if (++counter >= std::max<size_t>(1, nEpoch / p.r)) {
                    expected++;
                    counter = 0;
                    nEpoch = cover.instance().size();
                }
                REQUIRE(cover.rebuild_count() == expected);
                continue;
            }
            auto want = oracle(cover.instance());
            REQUIRE(cover.feasible() == want.feasible);
            if (want.feasible) CHECK(cover.cost() <= (3 + eps) * want.cost);
            CHECK(check_consistency(cover) == "");
        }
        CHECK(cover.stats().oneSidedMultiRoutes == 0);
    }
}
