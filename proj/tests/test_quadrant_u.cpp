#include <doctest.h>

#include <algorithm>
#include <random>

#include "dyncover/generate.hpp"
#include "dyncover/oracle.hpp"
#include "dyncover/quadrant_unweighted.hpp"
#include "helpers.hpp"

using namespace dyncover;
using testutil::rand_int;

namespace {

// Measured sweep constant and frozen ratio bounds; see README.
constexpr double kMu = 4;
constexpr double kCq = 12;
constexpr double kCadd = 4;

Instance quad_instance() {
    Instance inst;
    inst.kind = Kind::Quadrant2D;
    inst.pointRange = {0, 1, 0, 1};
    return inst;
}

Instance random_instance(std::mt19937_64& rng, int np, int nq, int bits = 6) {
    Instance inst = quad_instance();
    for (int i = 0; i < np; i++)
        apply_update(inst, UpdateOp::insert_point({testutil::dyadic(rng, 0, 1, bits), testutil::dyadic(rng, 0, 1, bits)}));
    for (int i = 0; i < nq; i++) apply_update(inst, UpdateOp::insert_range(testutil::rand_quadrant(rng, 0, 1, 1, bits)));
    return inst;
}

OracleResult brute(const Instance& inst) { return exact_bruteforce(inst.point_list(), inst.range_list(), 16); }

ApproxParams composite_params() {
    ApproxParams p;
    p.deltaOverride = 0;
    p.baseThreshold = 4;
    return p;
}

QuadrantSweep sweep_of(const Instance& inst) {
    QuadrantSweep s;
    for (auto& [p, c] : inst.points) s.insert_point(p);
    for (auto& [r, c] : inst.ranges) s.insert(std::get<Quadrant>(r));
    return s;
}

}  // namespace

TEST_CASE("sweep examples") {
    Instance inst = quad_instance();
    for (int i = 0; i < 10; i++) apply_update(inst, UpdateOp::insert_point({0.1 * i, 0.05 * i}));
    apply_update(inst, UpdateOp::insert_range(Quadrant{Dir::SW, 1, 1, 1}));
    auto one = sweep_of(inst).run(kInf);
    CHECK(one.status == QuadrantSweep::Status::Done);
    CHECK(one.picks.size() <= 4);
    CHECK(one.rounds == 1);

    // Staircase: point i only lies in its own NE quadrant.
    Instance stair = quad_instance();
    for (int i = 0; i < 8; i++) {
        double x = 0.1 * i, y = 0.8 - 0.1 * i;
        apply_update(stair, UpdateOp::insert_point({x, y}));
        apply_update(stair, UpdateOp::insert_range(Quadrant{Dir::NE, x, y, 1}));
    }
    auto st = sweep_of(stair).run(kInf);
    CHECK(st.status == QuadrantSweep::Status::Done);
    CHECK(st.picks.size() == 8);
    CHECK(is_cover(stair.point_list(), std::vector<Range>(st.picks.begin(), st.picks.end()), Kind::Quadrant2D));

    CHECK(sweep_of(stair).run(0).status == QuadrantSweep::Status::Exhausted);
    apply_update(stair, UpdateOp::insert_point({0.95, 0.0}));
    CHECK(sweep_of(stair).run(kInf).status == QuadrantSweep::Status::Infeasible);
}

TEST_CASE("sweep extra quadrants take part") {
    Instance inst = quad_instance();
    apply_update(inst, UpdateOp::insert_point({0.5, 0.5}));
    auto s = sweep_of(inst);
    CHECK(s.run(kInf).status == QuadrantSweep::Status::Infeasible);
    auto r = s.run(kInf, {Quadrant{Dir::NW, 0.7, 0.2, 1}});
    REQUIRE(r.status == QuadrantSweep::Status::Done);
    CHECK(r.picks == std::vector<Quadrant>{Quadrant{Dir::NW, 0.7, 0.2, 1}});
}

TEST_CASE("sweep ratio against brute force") {
    std::mt19937_64 rng(50);
    double worst = 1;
    for (int iter = 0; iter < 400; iter++) {
        Instance inst = random_instance(rng, rand_int(rng, 1, 40), rand_int(rng, 1, 14));
        auto res = sweep_of(inst).run(kInf);
        auto want = brute(inst);
        REQUIRE((res.status == QuadrantSweep::Status::Done) == want.feasible);
        if (!want.feasible) continue;
        CHECK(is_cover(inst.point_list(), std::vector<Range>(res.picks.begin(), res.picks.end()), Kind::Quadrant2D));
        worst = std::max(worst, static_cast<double>(res.picks.size()) / want.cost);
    }
    MESSAGE("worst sweep ratio " << worst);
    CHECK(worst <= kMu);
}

TEST_CASE("empty and single instances") {
    Instance inst = quad_instance();
    QuadrantCoverU empty(inst, {});
    CHECK(empty.feasible());
    CHECK(empty.size() == 0);
    CHECK(check_consistency(empty).empty());

    apply_update(inst, UpdateOp::insert_point({0.3, 0.3}));
    apply_update(inst, UpdateOp::insert_range(Quadrant{Dir::SW, 0.6, 0.6, 1}));
    QuadrantCoverU one(inst, {});
    CHECK(one.feasible());
    CHECK(one.size() == 1);
    CHECK(one.multiplicity(Quadrant{Dir::SW, 0.6, 0.6, 1}) == 1);
    CHECK(check_consistency(one).empty());
}

TEST_CASE("static ratio on tiny instances") {
    std::mt19937_64 rng(51);
    double worst = 1;
    int compared = 0;
    for (int iter = 0; iter < 300; iter++) {
        Instance inst = random_instance(rng, rand_int(rng, 10, 60), rand_int(rng, 4, 14));
        auto want = brute(inst);
        for (bool forced : {false, true}) {
            QuadrantCoverU cover(inst, forced ? composite_params() : ApproxParams{});
            REQUIRE(cover.feasible() == want.feasible);
            CHECK(check_consistency(cover).empty());
            if (!want.feasible) continue;
            compared++;
            worst = std::max(worst, static_cast<double>(cover.size()) / want.cost);
            CHECK(cover.size() <= kCq * want.cost);
        }
    }
    MESSAGE("worst ratio " << worst << " over " << compared);
}

TEST_CASE("trivial quadrant insert touches no child") {
    std::mt19937_64 rng(52);
    Instance inst = random_instance(rng, 400, 300, 10);
    QuadrantCoverU cover(inst, {});
    REQUIRE(cover.grid_side() >= 2);
    uint64_t before = cover.stats().childUpdates;
    cover.update(UpdateOp::insert_range(Quadrant{Dir::NE, -0.05, 1.05, 1}));
    cover.update(UpdateOp::insert_range(Quadrant{Dir::SW, 1.05, 0.3, 1}));
    CHECK(cover.stats().childUpdates == before);
    auto points_before = cover.children();
    cover.update(UpdateOp::insert_point({0.5, 0.5}));
    auto points_after = cover.children();
    REQUIRE(points_after.size() == points_before.size());
    int touched = 0;
    for (size_t k = 0; k < points_after.size(); k++) touched += points_after[k].points != points_before[k].points;
    CHECK(touched == 3);
}

TEST_CASE("deleting the only cover of a point makes the instance infeasible") {
    Instance inst = quad_instance();
    apply_update(inst, UpdateOp::insert_point({0.5, 0.5}));
    apply_update(inst, UpdateOp::insert_point({0.1, 0.1}));
    apply_update(inst, UpdateOp::insert_range(Quadrant{Dir::NE, 0.4, 0.4, 1}));
    apply_update(inst, UpdateOp::insert_range(Quadrant{Dir::SW, 0.2, 0.2, 1}));
    QuadrantCoverU cover(inst, {});
    CHECK(cover.feasible());
    cover.update(UpdateOp::delete_range(Quadrant{Dir::NE, 0.4, 0.4, 1}));
    CHECK_FALSE(cover.feasible());
    CHECK(cover.report().empty());
    CHECK(cover.size() == 0);
}

TEST_CASE("forced composite solutions are valid covers") {
    std::mt19937_64 rng(53);
    for (int iter = 0; iter < 30; iter++) {
        Instance inst = random_instance(rng, rand_int(rng, 100, 600), rand_int(rng, 100, 600), 10);
        QuadrantCoverU cover(inst, composite_params());
        auto rep = cover.report();
        CHECK(check_consistency(cover).empty());
        if (cover.feasible()) {
            CHECK(is_cover(inst.point_list(), rep, Kind::Quadrant2D));
            CHECK_FALSE(cover.last_refresh_explicit());
        } else {
            CHECK_FALSE(is_cover(inst.point_list(), inst.range_list(), Kind::Quadrant2D));
        }
    }
}

TEST_CASE("composite size within the additive bound") {
    std::mt19937_64 rng(54);
    int composite = 0;
    for (int iter = 0; iter < 120; iter++) {
        Instance inst = random_instance(rng, rand_int(rng, 300, 700), 0, 10);
        // A few wide quadrants guarantee feasibility; the rest are random.
        for (auto q : {Quadrant{Dir::SW, 0.5, 0.5, 1}, Quadrant{Dir::NE, 0.5, 0.5, 1}, Quadrant{Dir::NW, 0.5, 0.5, 1},
                       Quadrant{Dir::SE, 0.5, 0.5, 1}})
            apply_update(inst, UpdateOp::insert_range(q));
        int extra = rand_int(rng, 0, 10);
        for (int i = 0; i < extra; i++) apply_update(inst, UpdateOp::insert_range(testutil::rand_quadrant(rng, 0, 1, 1, 10)));
        ApproxParams p = composite_params();
        QuadrantCoverU cover(inst, p);
        auto want = brute(inst);
        REQUIRE(want.feasible);
        REQUIRE(cover.feasible());
        if (cover.last_refresh_explicit()) continue;
        composite++;
        double r = cover.grid_side();
        CHECK(cover.size() <= (kMu + cover.child_eps()) * want.cost + kCadd * r * r);
        CHECK(check_consistency(cover).empty());
    }
    CHECK(composite > 0);
}

TEST_CASE("special quadrants dominate excluded partial intersectors") {
    std::mt19937_64 rng(55);
    for (int iter = 0; iter < 10; iter++) {
        Instance inst = random_instance(rng, 500, 500, 10);
        QuadrantCoverU cover(inst, {});
        REQUIRE(cover.grid_side() >= 2);
        Region root{inst.pointRange, true, true};
        std::vector<Quadrant> nontrivial;
        for (auto& [r, c] : inst.ranges) {
            auto& q = std::get<Quadrant>(r);
            if (root.inside(q.vx, q.vy)) nontrivial.push_back(q);
        }
        for (auto& child : cover.children()) {
            CHECK(child.specials.size() <= 5);
            for (auto& q : child.quadrants) {
                bool special = std::count(child.specials.begin(), child.specials.end(), q) > 0;
                CHECK((special || child.region.inside(q.vx, q.vy)));
            }
            for (auto& p : child.points)
                for (auto& q : nontrivial) {
                    if (child.region.inside(q.vx, q.vy) || !q.contains(p)) continue;
                    bool covered = false;
                    for (auto& s : child.specials) covered |= s.contains(p);
                    CHECK(covered);
                }
        }
    }
}

TEST_CASE("quadrant used as a special in several cells is counted in each") {
    Instance inst = quad_instance();
    for (int i = 0; i < 20; i++)
        for (int j = 0; j < 20; j++) {
            double x = (i + 0.5) / 20, y = (j + 0.5) / 20;
            apply_update(inst, UpdateOp::insert_point({x, y}));
            apply_update(inst, UpdateOp::insert_range(Quadrant{Dir::NE, x, y, 1}));
        }
    Quadrant big{Dir::SW, 0.99, 0.49, 1};
    apply_update(inst, UpdateOp::insert_range(big));
    ApproxParams p = composite_params();
    p.gridR = 6;
    QuadrantCoverU cover(inst, p);
    REQUIRE(cover.grid_side() == 6);
    REQUIRE(cover.feasible());
    CHECK_FALSE(cover.last_refresh_explicit());
    int specialIn = 0;
    for (auto& child : cover.children())
        specialIn += std::count(child.specials.begin(), child.specials.end(), big);
    CHECK(specialIn >= 3);
    CHECK(cover.multiplicity(big) >= 3);
    CHECK(check_consistency(cover).empty());
}

TEST_CASE("solving leaves stored state untouched") {
    std::mt19937_64 rng(56);
    Instance inst = random_instance(rng, 400, 400, 10);
    QuadrantCoverU cover(inst, composite_params());
    uint64_t before = cover.fingerprint();
    cover.size();
    cover.report();
    cover.multiplicity(inst.range_list().front());
    CHECK(cover.fingerprint() == before);
    QuadrantCoverU fresh(cover.instance(), composite_params());
    CHECK(fresh.fingerprint() == before);
}

TEST_CASE("random stream: consistency and rebuild schedule") {
    for (bool forced : {false, true}) {
        WorkloadConfig cfg;
        cfg.kind = Kind::Quadrant2D;
        cfg.nInitial = 600;
        cfg.nOps = 1500;
        cfg.snapshotEvery = 50;
        cfg.seed = forced ? 7 : 8;
        Workload wl = generate_workload(cfg);
        split_initial(wl);
        ApproxParams p = forced ? composite_params() : ApproxParams{};
        QuadrantCoverU cover(wl.initial, p);
        size_t nEpoch = wl.initial.size(), counter = 0;
        int divisor = cover.epoch_divisor();
        uint64_t expected = 0;
        for (auto& op : wl.ops) {
            cover.update(op);
            if (op.action != Action::Snapshot) {
                if (++counter >= std::max<size_t>(1, nEpoch / divisor)) {
                    expected++;
                    counter = 0;
                    nEpoch = cover.instance().size();
                    divisor = cover.epoch_divisor();
                }
                REQUIRE(cover.rebuild_count() == expected);
                continue;
            }
            CHECK(cover.feasible() == is_cover(cover.instance().point_list(), cover.instance().range_list(), Kind::Quadrant2D));
            CHECK(check_consistency(cover) == "");
        }
    }
}

TEST_CASE("small random stream: ratio whenever brute force applies") {
    WorkloadConfig cfg;
    cfg.kind = Kind::Quadrant2D;
    cfg.nInitial = 24;
    cfg.nOps = 1500;
    cfg.snapshotEvery = 10;
    cfg.seed = 9;
    cfg.deleteBias = 0.5;
    Workload wl = generate_workload(cfg);
    split_initial(wl);
    QuadrantCoverU cover(wl.initial, composite_params());
    int compared = 0;
    for (auto& op : wl.ops) {
        cover.update(op);
        if (op.action != Action::Snapshot) continue;
        CHECK(check_consistency(cover) == "");
        if (cover.instance().ranges.size() > 14) continue;
        auto want = brute(cover.instance());
        REQUIRE(cover.feasible() == want.feasible);
        if (!want.feasible) continue;
        compared++;
        CHECK(cover.size() <= kCq * want.cost);
    }
    CHECK(compared > 10);
}
