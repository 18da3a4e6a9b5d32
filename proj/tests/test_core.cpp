#include <doctest.h>

#include <random>

#include "dyncover/instance.hpp"
#include "dyncover/workload.hpp"
#include "helpers.hpp"

using namespace dyncover;

TEST_CASE("apply_update multiset semantics") {
    Instance inst;
    apply_update(inst, UpdateOp::insert_point({0.5}));
    CHECK(inst.point_count() == 1);
    apply_update(inst, UpdateOp::insert_point({0.5}));
    apply_update(inst, UpdateOp::delete_point({0.5}));
    CHECK(inst.points.at({0.5}) == 1);

    Instance empty;
    try {
        apply_update(empty, UpdateOp::delete_point({0.5}));
        FAIL("expected DeleteMissing");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DeleteMissing);
    }
}

TEST_CASE("apply_update rejects bad payloads") {
    Instance inst;
    auto code = [&](const UpdateOp& op) {
        try {
            apply_update(inst, op);
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::ConfigError;
    };
    CHECK(code(UpdateOp::insert_point({1.5})) == ErrorCode::OutOfRange);
    CHECK(code(UpdateOp::insert_range(Quadrant{Dir::NE, 0, 0, 1})) == ErrorCode::KindMismatch);
    CHECK(code(UpdateOp::insert_range(Interval{0, 1, 0})) == ErrorCode::WeightOutOfRange);
    CHECK(code(UpdateOp::insert_range(Interval{0, 1, 2})) == ErrorCode::WeightOutOfRange);
    inst.weighted = true;
    CHECK(code(UpdateOp::insert_range(Interval{0, 1, 0})) == ErrorCode::WeightOutOfRange);
    CHECK_NOTHROW(apply_update(inst, UpdateOp::insert_range(Interval{0, 1, 2})));
}

TEST_CASE("is_cover examples") {
    CHECK(is_cover({{0.5}}, {Interval{0, 1, 1}}, Kind::Interval1D));
    CHECK(is_cover({{0.5, 0.5}}, {Quadrant{Dir::SW, 0.6, 0.6, 1}}, Kind::Quadrant2D));
    CHECK_FALSE(is_cover({{0.9}}, {Interval{0, 0.5, 1}}, Kind::Interval1D));
    CHECK(is_cover({}, {}, Kind::Interval1D));
    CHECK(is_cover({{1.5, 1.0}}, {UnitSquare{0.5, 0.0, 1}}, Kind::UnitSquare2D));
    CHECK_FALSE(is_cover({{1.6, 1.0}}, {UnitSquare{0.5, 0.0, 1}}, Kind::UnitSquare2D));
}

TEST_CASE("is_cover agrees with the per-point scan") {
    std::mt19937_64 rng(7);
    for (int iter = 0; iter < 300; iter++) {
        int kind = iter % 3;
        std::vector<Point> pts;
        std::vector<Range> rs;
        int np = testutil::rand_int(rng, 0, 30), nr = testutil::rand_int(rng, 0, 12);
        for (int i = 0; i < np; i++) pts.push_back({testutil::dyadic(rng, 0, 3, 4), testutil::dyadic(rng, 0, 3, 4)});
        for (int i = 0; i < nr; i++) {
            if (kind == 0) rs.push_back(testutil::rand_interval(rng, 0, 3, 1.5, 1, 4));
            else if (kind == 1) rs.push_back(testutil::rand_quadrant(rng, 0, 3, 1, 4));
            else rs.push_back(UnitSquare{testutil::dyadic(rng, -1, 3, 4), testutil::dyadic(rng, -1, 3, 4), 1});
        }
        Kind k = kind == 0 ? Kind::Interval1D : kind == 1 ? Kind::Quadrant2D : Kind::UnitSquare2D;
        CHECK(is_cover(pts, rs, k) == is_cover_naive(pts, rs));
    }
}

TEST_CASE("workload parse and serialize") {
    SUBCASE("header only") {
        Instance inst;
        std::string text = serialize_workload(inst, {});
        CHECK(text == "#dyncover v1 kind=interval weighted=0 range=0 1\n");
        auto wl = parse_workload_text(text);
        CHECK(wl.ops.empty());
    }
    SUBCASE("single insert") {
        auto wl = parse_workload_text("#dyncover v1 kind=interval weighted=0 range=0 1\n+P 0.5\n");
        REQUIRE(wl.ops.size() == 1);
        CHECK(wl.ops[0].action == Action::InsertPoint);
        CHECK(wl.ops[0].point.x == 0.5);
    }
    SUBCASE("weighted interval range") {
        auto wl = parse_workload_text("#dyncover v1 kind=interval weighted=1 range=0 1\n+R 0.1 0.9 3\n");
        REQUIRE(wl.ops.size() == 1);
        CHECK(wl.ops[0].range == Range(Interval{0.1, 0.9, 3}));
    }
    SUBCASE("delete before insert parses, fails on apply") {
        auto wl = parse_workload_text("#dyncover v1 kind=interval weighted=1 range=0 1\n-R 0.1 0.9 3\n");
        REQUIRE(wl.ops.size() == 1);
        Instance inst = wl.initial;
        CHECK_THROWS_AS(apply_update(inst, wl.ops[0]), Error);
    }
    SUBCASE("parse errors carry line numbers") {
        try {
            parse_workload_text("#dyncover v1 kind=quadrant weighted=0 range=0 1 0 1\n+P 0.5 0.5\n+R XX 0 0\n");
            FAIL("expected ParseError");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::ParseError);
            CHECK(e.line() == 3);
        }
        CHECK_THROWS(parse_workload_text("#dyncover v1 kind=interval weighted=1 range=0 1\n+R 0 1\n"));
        CHECK_THROWS(parse_workload_text("garbage\n"));
    }
}

TEST_CASE("workload round trip on random streams") {
    std::mt19937_64 rng(11);
    for (int kind = 0; kind < 3; kind++) {
        Instance inst;
        inst.kind = kind == 0 ? Kind::Interval1D : kind == 1 ? Kind::Quadrant2D : Kind::UnitSquare2D;
        inst.weighted = kind != 1;
        inst.pointRange = kind == 0 ? Rect{0, 1, 0, 0} : Rect{0, 4, 0, 4};
        std::vector<UpdateOp> ops;
        for (int i = 0; i < 1000; i++) {
            int t = testutil::rand_int(rng, 0, 4);
            UpdateOp op;
            double w = inst.weighted ? testutil::rand_int(rng, 1, 64) : 1;
            if (t == 0) op = UpdateOp::insert_point({testutil::dyadic(rng, 0, 1, 20), kind ? testutil::dyadic(rng, 0, 4, 20) : 0});
            else if (t == 1) op = UpdateOp::delete_point({testutil::dyadic(rng, 0, 1, 20), kind ? testutil::dyadic(rng, 0, 4, 20) : 0});
            else if (t == 4) op = UpdateOp::snapshot();
            else {
                Range r;
                if (kind == 0) r = testutil::rand_interval(rng, 0, 1, 0.5, w, 20);
                else if (kind == 1) r = testutil::rand_quadrant(rng, 0, 4, w, 20);
                else r = UnitSquare{testutil::dyadic(rng, -1, 4, 20), testutil::dyadic(rng, -1, 4, 20), w};
                op = t == 2 ? UpdateOp::insert_range(r) : UpdateOp::delete_range(r);
            }
            op.opIndex = i;
            ops.push_back(op);
        }
        std::string text = serialize_workload(inst, ops);
        auto wl = parse_workload_text(text);
        CHECK(wl.ops == ops);
        CHECK(wl.initial == inst);
        CHECK(serialize_workload(wl.initial, wl.ops) == text);
    }
}

TEST_CASE("shortest round-trip formatting") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(3) == "3");
    CHECK(format_double(1.0 / 3) == "0.3333333333333333");
}
