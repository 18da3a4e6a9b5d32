#include <doctest.h>

#include <random>

#include "dyncover/instance.hpp"
#include "dyncover/oracle.hpp"
#include "helpers.hpp"

using namespace dyncover;
using testutil::dyadic;
using testutil::rand_int;

namespace {

std::vector<Range> as_ranges(const std::vector<Interval>& ivs) { return {ivs.begin(), ivs.end()}; }

// Exhaustive subset enumeration, independent of the branch-and-bound code.
double enumerate_min(const std::vector<Point>& pts, const std::vector<Range>& rs, bool cardinality) {
    double best = kInf;
    size_t m = rs.size();
    for (uint64_t mask = 0; mask < (uint64_t{1} << m); mask++) {
        std::vector<Range> pick;
        double cost = 0;
        for (size_t i = 0; i < m; i++)
            if (mask >> i & 1) {
                pick.push_back(rs[i]);
                cost += cardinality ? 1 : weight_of(rs[i]);
            }
        if (cost < best && is_cover_naive(pts, pick)) best = cost;
    }
    return best;
}

}  // namespace

TEST_CASE("exact unweighted interval examples") {
    auto r = exact_interval_unweighted({{0.2}, {0.5}, {0.8}}, {{0, 0.6, 1}, {0.4, 1, 1}, {0.1, 0.3, 1}});
    CHECK(r.feasible);
    CHECK(r.size == 2);
    CHECK(r.witness == std::vector<Range>{Interval{0, 0.6, 1}, Interval{0.4, 1, 1}});
    CHECK(exact_interval_unweighted({}, {}).size == 0);
    CHECK_FALSE(exact_interval_unweighted({{0.9}}, {{0, 0.5, 1}}).feasible);
}

TEST_CASE("exact weighted interval examples") {
    CHECK(exact_interval_weighted({{0.5}}, {{0, 1, 5}, {0.4, 0.6, 2}}).cost == 2);
    CHECK(exact_interval_weighted({}, {}).cost == 0);
    CHECK(exact_interval_weighted({{0.2}, {0.8}}, {{0, 0.3, 1}, {0.7, 1, 1}, {0, 1, 1.5}}).cost == 1.5);
}

TEST_CASE("exact bruteforce examples") {
    CHECK(exact_bruteforce({{0.5, 0.5}}, {Quadrant{Dir::SW, 0.6, 0.6, 1}}).cost == 1);
    auto r = exact_bruteforce({{0.1, 0.9}, {0.9, 0.1}},
                              {Quadrant{Dir::NW, 0.5, 0.5, 1}, Quadrant{Dir::SE, 0.5, 0.5, 1}, Quadrant{Dir::SW, 1, 1, 1.5}});
    CHECK(r.cost == 1.5);
    std::vector<Range> many;
    for (int i = 0; i < 17; i++) many.push_back(Interval{0, static_cast<double>(i), 1});
    try {
        exact_bruteforce({{0.0}}, many);
        FAIL("expected TooLarge");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::TooLarge);
    }
}

TEST_CASE("greedy baseline examples") {
    auto r = greedy_baseline({{0.5}}, {Interval{0, 1, 1}});
    CHECK(r.size == 1);
    CHECK_FALSE(greedy_baseline({{0.9}}, {Interval{0, 0.5, 1}}).feasible);
}

TEST_CASE("interval oracles equal exhaustive search") {
    std::mt19937_64 rng(21);
    for (int iter = 0; iter < 300; iter++) {
        int np = rand_int(rng, 0, 12), ni = rand_int(rng, 1, 12);
        std::vector<Point> pts;
        std::vector<Interval> ivs;
        for (int i = 0; i < np; i++) pts.push_back({dyadic(rng, 0, 1, 5)});
        for (int i = 0; i < ni; i++) ivs.push_back(testutil::rand_interval(rng, 0, 1, 0.5, rand_int(rng, 1, 9), 5));
        double wantW = enumerate_min(pts, as_ranges(ivs), false);
        double wantU = enumerate_min(pts, as_ranges(ivs), true);
        auto w = exact_interval_weighted(pts, ivs);
        auto u = exact_interval_unweighted(pts, ivs);
        CHECK(w.feasible == (wantW < kInf));
        CHECK(u.feasible == (wantU < kInf));
        if (wantW < kInf) {
            CHECK(w.cost == wantW);
            CHECK(u.size == wantU);
            CHECK(is_cover(pts, w.witness, Kind::Interval1D));
            CHECK(is_cover(pts, u.witness, Kind::Interval1D));
        }
    }
}

TEST_CASE("greedy sweep exchange property") {
    // The k-th greedy interval reaches at least as far right as the k-th
    // interval (by right endpoint) of any optimal cover.
    std::mt19937_64 rng(22);
    for (int iter = 0; iter < 200; iter++) {
        std::vector<Point> pts;
        std::vector<Interval> ivs;
        for (int i = 0; i < 8; i++) pts.push_back({dyadic(rng, 0, 1, 5)});
        for (int i = 0; i < 9; i++) ivs.push_back(testutil::rand_interval(rng, 0, 1, 0.4, 1, 5));
        auto g = exact_interval_unweighted(pts, ivs);
        if (!g.feasible) continue;
        for (uint64_t mask = 0; mask < (uint64_t{1} << ivs.size()); mask++) {
            if (static_cast<size_t>(__builtin_popcountll(mask)) != g.size) continue;
            std::vector<Range> pick;
            std::vector<double> bs;
            for (size_t i = 0; i < ivs.size(); i++)
                if (mask >> i & 1) {
                    pick.push_back(ivs[i]);
                    bs.push_back(ivs[i].b);
                }
            if (!is_cover_naive(pts, pick)) continue;
            std::sort(bs.begin(), bs.end());
            for (size_t k = 0; k < g.size; k++) CHECK(std::get<Interval>(g.witness[k]).b >= bs[k]);
        }
    }
}

TEST_CASE("bruteforce equals exhaustive search and bounds greedy") {
    std::mt19937_64 rng(23);
    for (int iter = 0; iter < 200; iter++) {
        std::vector<Point> pts;
        std::vector<Range> qs;
        int np = rand_int(rng, 1, 10), nq = rand_int(rng, 1, 10);
        for (int i = 0; i < np; i++) pts.push_back({dyadic(rng, 0, 1, 4), dyadic(rng, 0, 1, 4)});
        for (int i = 0; i < nq; i++) qs.push_back(testutil::rand_quadrant(rng, 0, 1, rand_int(rng, 1, 8), 3));
        double want = enumerate_min(pts, qs, false);
        auto bf = exact_bruteforce(pts, qs);
        auto gr = greedy_baseline(pts, qs);
        CHECK(bf.feasible == (want < kInf));
        CHECK(gr.feasible == bf.feasible);
        if (want < kInf) {
            CHECK(bf.cost == doctest::Approx(want));
            CHECK(gr.cost >= bf.cost - 1e-9);
            CHECK(is_cover(pts, bf.witness, Kind::Quadrant2D));
        }
    }
}
