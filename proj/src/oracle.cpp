#include "dyncover/oracle.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <set>

#include "dyncover/errors.hpp"

namespace dyncover {

namespace {

std::vector<double> sorted_unique_x(const std::vector<Point>& points) {
    std::vector<double> xs;
    xs.reserve(points.size());
    for (auto& p : points) xs.push_back(p.x);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return xs;
}

OracleResult infeasible() {
    OracleResult r;
    r.feasible = false;
    return r;
}

}  // namespace

OracleResult exact_interval_unweighted(const std::vector<Point>& points, const std::vector<Interval>& intervals) {
    std::vector<double> xs = sorted_unique_x(points);
    std::vector<Interval> iv = intervals;
    std::sort(iv.begin(), iv.end(), [](const Interval& l, const Interval& r) { return l.a < r.a; });
    OracleResult res;
    size_t k = 0;
    size_t i = 0;
    // Best interval among those with a <= current point, by maximum b.
    const Interval* best = nullptr;
    while (i < xs.size()) {
        double p = xs[i];
        while (k < iv.size() && iv[k].a <= p) {
            if (!best || iv[k].b > best->b) best = &iv[k];
            k++;
        }
        if (!best || best->b < p) return infeasible();
        res.witness.push_back(*best);
        res.cost += best->w;
        double reach = best->b;
        while (i < xs.size() && xs[i] <= reach) i++;
    }
    res.size = res.witness.size();
    return res;
}

OracleResult exact_interval_weighted(const std::vector<Point>& points, const std::vector<Interval>& intervals) {
    std::vector<double> xs = sorted_unique_x(points);
    size_t n = xs.size();
    std::vector<Interval> iv = intervals;
    std::sort(iv.begin(), iv.end(), [](const Interval& l, const Interval& r) { return l.a < r.a; });
    std::vector<double> D(n + 1, kInf);
    std::vector<int> choice(n + 1, -1);
    D[0] = 0;
    // (value, interval index); expired entries (b < current point) are popped lazily.
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    size_t k = 0;
    for (size_t j = 1; j <= n; j++) {
        double p = xs[j - 1];
        while (k < iv.size() && iv[k].a <= p) {
            size_t pred = std::lower_bound(xs.begin(), xs.end(), iv[k].a) - xs.begin();
            if (D[pred] < kInf) heap.push({D[pred] + iv[k].w, static_cast<int>(k)});
            k++;
        }
        while (!heap.empty() && iv[heap.top().second].b < p) heap.pop();
        if (heap.empty()) return infeasible();
        D[j] = heap.top().first;
        choice[j] = heap.top().second;
    }
    OracleResult res;
    res.cost = D[n];
    size_t j = n;
    while (j > 0) {
        const Interval& I = iv[choice[j]];
        res.witness.push_back(I);
        j = std::lower_bound(xs.begin(), xs.end(), I.a) - xs.begin();
    }
    std::reverse(res.witness.begin(), res.witness.end());
    res.size = res.witness.size();
    return res;
}

namespace {

using Mask = std::vector<uint64_t>;

struct CoverTable {
    std::vector<Point> pts;
    std::vector<Range> ranges;
    std::vector<Mask> masks;
    size_t words = 0;
};

CoverTable make_table(const std::vector<Point>& points, const std::vector<Range>& ranges) {
    CoverTable t;
    std::set<Point> ps(points.begin(), points.end());
    t.pts.assign(ps.begin(), ps.end());
    std::set<Range> rs(ranges.begin(), ranges.end());
    t.ranges.assign(rs.begin(), rs.end());
    t.words = (t.pts.size() + 63) / 64;
    for (auto& r : t.ranges) {
        Mask m(t.words, 0);
        for (size_t i = 0; i < t.pts.size(); i++)
            if (range_contains(r, t.pts[i])) m[i / 64] |= uint64_t{1} << (i % 64);
        t.masks.push_back(std::move(m));
    }
    return t;
}

size_t popcount(const Mask& m) {
    size_t c = 0;
    for (auto w : m) c += __builtin_popcountll(w);
    return c;
}

}  // namespace

OracleResult exact_bruteforce(const std::vector<Point>& points, const std::vector<Range>& ranges, size_t maxRanges) {
    CoverTable t = make_table(points, ranges);
    if (t.ranges.size() > maxRanges)
        throw Error(ErrorCode::TooLarge, std::to_string(t.ranges.size()) + " distinct ranges exceed the bound");
    size_t n = t.pts.size();
    // Order by descending coverage so that strong ranges are tried first.
    std::vector<int> order(t.ranges.size());
    for (size_t i = 0; i < order.size(); i++) order[i] = static_cast<int>(i);
    std::vector<size_t> cov(t.ranges.size());
    for (size_t i = 0; i < cov.size(); i++) cov[i] = popcount(t.masks[i]);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return cov[a] > cov[b]; });

    double bestCost = kInf;
    std::vector<int> bestPick, pick;
    Mask covered(t.words, 0);

    std::function<void(double)> rec = [&](double cost) {
        if (cost >= bestCost) return;
        size_t first = n;
        for (size_t w = 0; w < t.words; w++) {
            uint64_t need = ~covered[w];
            if (w == t.words - 1 && n % 64) need &= (uint64_t{1} << (n % 64)) - 1;
            if (need) {
                first = w * 64 + __builtin_ctzll(need);
                break;
            }
        }
        if (first >= n) {
            bestCost = cost;
            bestPick = pick;
            return;
        }
        // Some chosen range must cover the first uncovered point.
        for (int idx : order) {
            if (!(t.masks[idx][first / 64] >> (first % 64) & 1)) continue;
            Mask saved = covered;
            for (size_t w = 0; w < t.words; w++) covered[w] |= t.masks[idx][w];
            pick.push_back(idx);
            rec(cost + weight_of(t.ranges[idx]));
            pick.pop_back();
            covered = std::move(saved);
        }
    };
    rec(0);
    if (bestCost == kInf) return infeasible();
    OracleResult res;
    res.cost = bestCost;
    for (int i : bestPick) res.witness.push_back(t.ranges[i]);
    res.size = res.witness.size();
    return res;
}

OracleResult greedy_baseline(const std::vector<Point>& points, const std::vector<Range>& ranges) {
    CoverTable t = make_table(points, ranges);
    size_t n = t.pts.size();
    Mask covered(t.words, 0);
    size_t done = 0;
    OracleResult res;
    while (done < n) {
        int best = -1;
        double bestRatio = 0;
        size_t bestGain = 0;
        for (size_t i = 0; i < t.ranges.size(); i++) {
            size_t gain = 0;
            for (size_t w = 0; w < t.words; w++) gain += __builtin_popcountll(t.masks[i][w] & ~covered[w]);
            if (gain == 0) continue;
            double ratio = static_cast<double>(gain) / weight_of(t.ranges[i]);
            if (best < 0 || ratio > bestRatio) {
                best = static_cast<int>(i);
                bestRatio = ratio;
                bestGain = gain;
            }
        }
        if (best < 0) return infeasible();
        for (size_t w = 0; w < t.words; w++) covered[w] |= t.masks[best][w];
        done += bestGain;
        res.witness.push_back(t.ranges[best]);
        res.cost += weight_of(t.ranges[best]);
    }
    res.size = res.witness.size();
    return res;
}

}  // namespace dyncover
