#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "dyncover/generate.hpp"
#include "dyncover/oracle.hpp"
#include "dyncover/unitsquare.hpp"
#include "helpers.hpp"

using namespace dyncover;
using testutil::rand_int;

namespace {

// Per-cell bounds from the quadrant tests; a square is used in at most four cells.
constexpr double kCq = 12;
constexpr double kCw = 8;
constexpr double kCellFactor = 4;

Instance square_instance(bool weighted, double side) {
    Instance inst;
    inst.kind = Kind::UnitSquare2D;
    inst.weighted = weighted;
    inst.pointRange = {0, side, 0, side};
    return inst;
}

UnitSquare rand_square(std::mt19937_64& rng, double side, double w, int bits = 5) {
    return UnitSquare{testutil::dyadic(rng, -0.5, side - 0.5, bits), testutil::dyadic(rng, -0.5, side - 0.5, bits), w};
}

Point rand_point(std::mt19937_64& rng, double side, int bits = 5) {
    return {testutil::dyadic(rng, 0, side, bits), testutil::dyadic(rng, 0, side, bits)};
}

Instance random_instance(std::mt19937_64& rng, bool weighted, double side, int np, int ns, int64_t U) {
    Instance inst = square_instance(weighted, side);
    for (int i = 0; i < np; i++) apply_update(inst, UpdateOp::insert_point(rand_point(rng, side)));
    while (static_cast<int>(inst.ranges.size()) < ns) {
        double w = weighted ? static_cast<double>(std::uniform_int_distribution<int64_t>(1, U)(rng)) : 1;
        apply_update(inst, UpdateOp::insert_range(rand_square(rng, side, w)));
    }
    return inst;
}

ApproxParams small_params(int64_t U = 64) {
    ApproxParams p;
    p.baseThreshold = 4;
    p.deltaExp = 1.0 / 3;
    p.U = U;
    return p;
}

}  // namespace

TEST_CASE("a square in one cell") {
    Instance inst = square_instance(false, 2);
    apply_update(inst, UpdateOp::insert_point({0.5, 0.5}));
    UnitSquare s{0, 0, 1};
    apply_update(inst, UpdateOp::insert_range(s));
    UnitSquareCover cover(inst, ApproxParams{});
    auto cells = cover.cells_of(s);
    // The square's closed top and right edges touch the neighbouring cells.
    CHECK(std::find(cells.begin(), cells.end(), UnitSquareCover::Cell{0, 0}) != cells.end());
    CHECK(cover.derived(s, {0, 0}).contains(Point{0.5, 0.5}));
    CHECK(cover.live_cells() == 4);
    CHECK(cover.feasible());
    CHECK(cover.size() == 1);
    CHECK(cover.multiplicity(s) == 1);
}

TEST_CASE("a straddling square derives four quadrants") {
    Instance inst = square_instance(true, 3);
    UnitSquareCover cover(inst, ApproxParams{});
    UnitSquare s{0.5, 0.5, 7};
    auto cells = cover.cells_of(s);
    REQUIRE(cells.size() == 4);
    std::set<Dir> dirs;
    for (auto& c : cells) {
        Quadrant q = cover.derived(s, c);
        CHECK(q.w == 7);
        dirs.insert(q.dir);
    }
    CHECK(dirs.size() == 4);
}

TEST_CASE("footprints agree inside every cell") {
    std::mt19937_64 rng(3);
    for (double side : {1.0, 2.5, 4.0}) {
        UnitSquareCover cover(square_instance(false, side), ApproxParams{});
        for (int it = 0; it < 3000; it++) {
            UnitSquare s = rand_square(rng, side, 1, 6);
            Point p = rand_point(rng, side, 6);
            auto c = cover.cell_of(p);
            CHECK(cover.cell_rect(c).contains(p));
            auto cells = cover.cells_of(s);
            bool listed = std::find(cells.begin(), cells.end(), c) != cells.end();
            if (s.contains(p)) REQUIRE(listed);
            if (listed) CHECK(s.contains(p) == cover.derived(s, c).contains(p));
        }
    }
}

TEST_CASE("ratio against the exact optimum on squares") {
    std::mt19937_64 rng(7);
    for (bool weighted : {false, true}) {
        double worst = 0;
        int checked = 0;
        for (int it = 0; it < 160; it++) {
            int64_t U = weighted ? (it % 2 ? 8 : 64) : 1;
            Instance inst = random_instance(rng, weighted, 3, 0, rand_int(rng, 4, 14), U);
            // Points mostly inside the squares so that most instances are feasible.
            std::vector<Range> sq = inst.range_list();
            for (int i = rand_int(rng, 10, 80); i > 0; i--) {
                const auto& s = std::get<UnitSquare>(sq[rand_int(rng, 0, static_cast<int>(sq.size()) - 1)]);
                Point p{std::clamp(s.cx + testutil::dyadic(rng, 0, 1, 5), 0.0, 3.0), std::clamp(s.cy + testutil::dyadic(rng, 0, 1, 5), 0.0, 3.0)};
                if (rand_int(rng, 0, 19) == 0) p = rand_point(rng, 3);
                apply_update(inst, UpdateOp::insert_point(p));
            }
            auto opt = exact_bruteforce(inst.point_list(), inst.range_list(), 16);
            UnitSquareCover cover(inst, small_params(std::max<int64_t>(U, 1)));
            REQUIRE(cover.feasible() == opt.feasible);
            CHECK(check_consistency(cover) == "");
            if (!opt.feasible) continue;
            double bound = kCellFactor * (weighted ? kCw : kCq);
            CHECK(cover.cost() >= opt.cost);
            CHECK(cover.cost() <= bound * opt.cost);
            worst = std::max(worst, cover.cost() / opt.cost);
            checked++;
        }
        MESSAGE(std::string(weighted ? "weighted" : "unweighted") << " worst ratio " << worst << " over " << checked);
        CHECK(checked >= 40);
    }
}

TEST_CASE("deleting a square removes its derived quadrants") {
    std::mt19937_64 rng(11);
    Instance inst = random_instance(rng, true, 3, 40, 12, 64);
    UnitSquare s{0.75, 0.75, 5};
    apply_update(inst, UpdateOp::insert_range(s));
    UnitSquareCover cover(inst, small_params());
    size_t cellsBefore = cover.live_cells();
    cover.update(UpdateOp::delete_range(s));
    CHECK(cover.multiplicity(s) == 0);
    CHECK(cover.live_cells() <= cellsBefore);
    CHECK(check_consistency(cover) == "");
    for (auto& r : cover.report()) CHECK(cover.instance().ranges.count(r) == 1);
}

TEST_CASE("a lone point without squares is infeasible") {
    Instance inst = square_instance(false, 4);
    apply_update(inst, UpdateOp::insert_point({3.5, 3.5}));
    apply_update(inst, UpdateOp::insert_point({0.5, 0.5}));
    apply_update(inst, UpdateOp::insert_range(UnitSquare{0, 0, 1}));
    UnitSquareCover cover(inst, ApproxParams{});
    CHECK_FALSE(cover.feasible());
    CHECK(cover.report().empty());
    cover.update(UpdateOp::insert_range(UnitSquare{3, 3, 1}));
    CHECK(cover.feasible());
    CHECK(cover.size() == 2);
}

TEST_CASE("weights outside [1, U] leave the instance untouched") {
    ApproxParams p;
    p.U = 8;
    UnitSquareCover cover(square_instance(true, 2), p);
    CHECK_THROWS_AS(cover.update(UpdateOp::insert_range(UnitSquare{0.5, 0.5, 9})), Error);
    CHECK_THROWS_AS(cover.update(UpdateOp::insert_range(UnitSquare{0.5, 0.5, 2.5})), Error);
    CHECK(cover.instance().ranges.empty());
    CHECK(cover.live_cells() == 0);
}

TEST_CASE("update streams stay consistent") {
    for (bool weighted : {false, true}) {
        WorkloadConfig cfg;
        cfg.kind = Kind::UnitSquare2D;
        cfg.weighted = weighted;
        cfg.nInitial = 200;
        cfg.nOps = 1000;
        cfg.snapshotEvery = 50;
        cfg.maxWeight = 64;
        cfg.side = 4;
        cfg.seed = weighted ? 5 : 6;
        Workload wl = generate_workload(cfg);
        split_initial(wl);
        UnitSquareCover cover(wl.initial, small_params());
        int snaps = 0;
        for (auto& op : wl.ops) {
            if (op.action == Action::Snapshot) {
                CHECK(check_consistency(cover) == "");
                auto g = greedy_baseline(cover.instance().point_list(), cover.instance().range_list());
                CHECK(cover.feasible() == g.feasible);
                snaps++;
            }
            cover.update(op);
        }
        CHECK(snaps >= 15);
        CHECK(cover.rebuild_count() >= 1);
    }
}
