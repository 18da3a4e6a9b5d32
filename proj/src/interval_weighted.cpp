#include "dyncover/interval_weighted.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <set>

#include "dyncover/oracle.hpp"
#include "portions.hpp"

namespace dyncover {

using detail::choose_cuts;
using detail::locate_ext;
using detail::route_interval;

namespace {

constexpr double kOptMinusPower = 3;  // opt- = (eps/4) * opt~ / n^3
constexpr int kMaxBuckets = 512;

// One-sided candidate; real == false marks the free interval handed down by
// the parent, or the empty sentinel when there is none.
struct Cand {
    double w = 0;
    double end = 0;  // b for left candidates, a for right ones (normalized to a point)
    Interval iv;
    bool real = false;
};

uint64_t mix(uint64_t h, double v) {
    uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    for (int i = 0; i < 8; i++) {
        h ^= (bits >> (8 * i)) & 0xff;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace

DpResult dp_over_portions(int pL, int pR, const std::vector<double>& shortCost, const std::vector<LongEntry>& longs) {
    DpResult res;
    if (pL > pR) {
        res.cost = 0;
        return res;
    }
    int len = pR - pL + 1;
    // opt[j] covers portions pL..pL+j-1; opt[0] = 0.
    std::vector<double> opt(len + 1, kInf);
    std::vector<int> viaLong(len + 1, -1), prev(len + 1, -1);
    opt[0] = 0;
    auto optBefore = [&](int portion) { return portion < pL ? 0.0 : opt[portion - pL + 1]; };
    for (int i = pL; i <= pR; i++) {
        int j = i - pL + 1;
        double bestLong = kInf;
        int bestIdx = -1;
        for (size_t e = 0; e < longs.size(); e++) {
            const LongEntry& L = longs[e];
            if (!(L.s <= i && i < L.t)) continue;
            double v = optBefore(L.s - 1) + L.w;
            if (v < bestLong || (v == bestLong && bestIdx >= 0 && L.s < longs[bestIdx].s)) {
                bestLong = v;
                bestIdx = static_cast<int>(e);
            }
        }
        double viaShort = opt[j - 1] + shortCost[i];
        if (bestIdx >= 0 && bestLong <= viaShort) {
            opt[j] = bestLong;
            viaLong[j] = bestIdx;
            prev[j] = std::max(0, longs[bestIdx].s - pL);
        } else {
            opt[j] = viaShort;
            prev[j] = j - 1;
        }
    }
    res.cost = opt[len];
    if (res.cost == kInf) return res;
    for (int j = len; j > 0; j = prev[j]) {
        if (viaLong[j] >= 0) res.longsUsed.push_back(viaLong[j]);
        else res.shortUsed.push_back(pL + j - 1);
    }
    std::reverse(res.longsUsed.begin(), res.longsUsed.end());
    std::reverse(res.shortUsed.begin(), res.shortUsed.end());
    return res;
}

struct IntervalCoverW::Node {
    struct Choice {
        double cost = 0;
        size_t size = 0;
        std::vector<Interval> own;  // real intervals chosen at this node
        struct KidUse {
            int kid;
            double bL, aR;
        };
        std::vector<KidUse> kids;
    };

    const ApproxParams* params = nullptr;
    CoverStats* stats = nullptr;
    double lo = 0, hi = 1;
    int depth = 0;
    double eps = 0.5;

    std::map<double, int64_t> pts;
    std::map<Interval, int64_t> ivs;
    size_t npts = 0, nivs = 0;
    double totalWeight = 0;
    IntervalContainmentIndex contain;
    RangeMinMax2D longIdx{RangeMinMax2D::Mode::MinWeight};
    std::multimap<Interval, uint64_t> longHandles;
    std::map<double, std::multiset<std::pair<double, double>>> leftByW;   // w -> (b, -a) of intervals with a < lo
    std::map<double, std::multiset<std::pair<double, double>>> rightByW;  // w -> (a, b) of intervals with b > hi

    std::vector<double> cuts;
    std::vector<std::unique_ptr<Node>> kids;
    double kidEps = 0;
    size_t nEpoch = 0;
    size_t epochCount = 0;

    // Derived state, recomputed lazily after any change below this node.
    bool dirty = true;
    double est = 0;
    double d1 = 0;
    std::vector<Cand> leftCands, rightCands;
    std::vector<LongEntry> catalog;
    std::vector<Interval> catalogIv;
    std::map<std::pair<double, double>, Choice> memo;

    size_t n() const { return npts + nivs; }
    bool leaf() const { return cuts.empty(); }

    void add_interval(const Interval& iv) {
        contain.insert(iv);
        longHandles.emplace(iv, longIdx.insert(iv.a, iv.b, iv.w));
        if (iv.a < lo) leftByW[iv.w].insert({iv.b, -iv.a});
        if (iv.b > hi) rightByW[iv.w].insert({iv.a, iv.b});
        totalWeight += iv.w;
    }

    void remove_interval(const Interval& iv) {
        contain.erase(iv);
        auto h = longHandles.find(iv);
        longIdx.erase(h->second);
        longHandles.erase(h);
        auto drop = [](auto& byW, double w, std::pair<double, double> key) {
            auto it = byW.find(w);
            it->second.erase(it->second.find(key));
            if (it->second.empty()) byW.erase(it);
        };
        if (iv.a < lo) drop(leftByW, iv.w, {iv.b, -iv.a});
        if (iv.b > hi) drop(rightByW, iv.w, {iv.a, iv.b});
        totalWeight -= iv.w;
    }

    void build() {
        kids.clear();
        cuts.clear();
        contain = IntervalContainmentIndex();
        longIdx.clear();
        longHandles.clear();
        leftByW.clear();
        rightByW.clear();
        totalWeight = 0;
        for (auto& [iv, c] : ivs)
            for (int64_t t = 0; t < c; t++) add_interval(iv);
        nEpoch = n();
        epochCount = 0;
        dirty = true;
        memo.clear();
        if (n() < params->baseThreshold || depth >= params->maxDepth) return;

        std::vector<double> coords;
        for (auto& [x, c] : pts) coords.insert(coords.end(), c, x);
        for (auto& [iv, c] : ivs)
            for (double e : {iv.a, iv.b})
                if (lo <= e && e <= hi) coords.insert(coords.end(), c, e);
        std::vector<double> cs = choose_cuts(std::move(coords), lo, hi, params->r);
        if (cs.size() < 3) return;
        cuts = std::move(cs);
        int k = static_cast<int>(cuts.size()) - 1;
        kidEps = detail::child_eps(eps, params->eps, n(), params->r);
        for (int i = 0; i < k; i++) {
            auto kid = std::make_unique<Node>();
            kid->params = params;
            kid->stats = stats;
            kid->lo = cuts[i];
            kid->hi = cuts[i + 1];
            kid->depth = depth + 1;
            kid->eps = kidEps;
            kids.push_back(std::move(kid));
        }
        for (auto& [x, c] : pts) {
            Node& kid = *kids[GridLocator::locate(cuts, x)];
            kid.pts[x] += c;
            kid.npts += c;
        }
        int route[2];
        for (auto& [iv, c] : ivs) {
            int cnt = route_interval(iv, cuts, route);
            for (int j = 0; j < cnt; j++) {
                kids[route[j]]->ivs[iv] += c;
                kids[route[j]]->nivs += c;
            }
        }
        for (auto& kid : kids) kid->build();
    }

    void rebuild() {
        stats->nodeRebuilds++;
        if (depth == 0) stats->rootRebuilds++;
        build();
    }

    void touch() {
        dirty = true;
        memo.clear();
    }

    void update_point(double x, bool insert) {
        if (insert) {
            pts[x]++;
            npts++;
        } else {
            if (--pts[x] == 0) pts.erase(x);
            npts--;
        }
        touch();
        if (++epochCount >= std::max<size_t>(1, nEpoch / params->r)) return rebuild();
        if (!leaf()) kids[GridLocator::locate(cuts, x)]->update_point(x, insert);
    }

    void update_interval(const Interval& iv, bool insert) {
        if (insert) {
            ivs[iv]++;
            nivs++;
            add_interval(iv);
        } else {
            if (--ivs[iv] == 0) ivs.erase(iv);
            nivs--;
            remove_interval(iv);
        }
        touch();
        if (++epochCount >= std::max<size_t>(1, nEpoch / params->r)) return rebuild();
        if (leaf()) return;
        int route[2];
        int cnt = route_interval(iv, cuts, route);
        if (iv.a < lo || iv.b > hi) {
            stats->oneSidedUpdates++;
            if (cnt > 1) stats->oneSidedMultiRoutes++;
        }
        for (int j = 0; j < cnt; j++) kids[route[j]]->update_interval(iv, insert);
    }

    std::vector<Point> point_list() const {
        std::vector<Point> out;
        for (auto& [x, c] : pts) out.push_back({x, 0});
        return out;
    }

    std::vector<Interval> interval_list() const {
        std::vector<Interval> out;
        for (auto& [iv, c] : ivs) out.push_back(iv);
        return out;
    }

    // Largest point <= b, or -inf.
    double norm_left(double b) const {
        if (b == -kInf) return b;
        auto it = pts.upper_bound(b);
        return it == pts.begin() ? -kInf : std::prev(it)->first;
    }

    // Smallest point >= a, or +inf.
    double norm_right(double a) const {
        if (a == kInf) return a;
        auto it = pts.lower_bound(a);
        return it == pts.end() ? kInf : it->first;
    }

    // Smallest i >= 1 with w <= delta_i = d1 * g^(i-1).
    static int bucket_of(double w, double d1, double g) {
        if (w <= d1) return 1;
        int i = 1 + static_cast<int>(std::ceil(std::log(w / d1) / std::log(g)));
        while (i > 1 && w <= d1 * std::pow(g, i - 2)) i--;
        while (w > d1 * std::pow(g, i - 1)) i++;
        return i;
    }

    void prepare() {
        if (!dirty) return;
        dirty = false;
        memo.clear();
        leftCands.clear();
        rightCands.clear();
        catalog.clear();
        catalogIv.clear();
        if (npts == 0) {
            est = 0;
        } else if (leaf()) {
            auto r = exact_interval_weighted(point_list(), interval_list());
            est = r.feasible ? r.cost : kInf;
        } else {
            // Per portion: the cheaper of its sub-structure estimate and a single container.
            est = 0;
            for (size_t i = 0; i < kids.size(); i++) {
                Node& kid = *kids[i];
                kid.prepare();
                if (kid.npts == 0) continue;
                double best = kid.est;
                if (auto c = contain.query(cuts[i], cuts[i + 1])) best = std::min(best, c->w);
                est += best;
            }
        }
        if (leaf()) return;
        for (auto& kid : kids) kid->prepare();
        build_catalog();
        build_candidates();
    }

    void build_catalog() {
        int k = static_cast<int>(kids.size());
        for (int s = 0; s <= k; s++)
            for (int t = s + 1; t <= k; t++) {
                Rect q;
                q.x0 = s == 0 ? -kInf : std::nextafter(cuts[s - 1], kInf);
                q.x1 = cuts[s];
                q.y0 = cuts[t];
                q.y1 = t == k ? kInf : std::nextafter(cuts[t + 1], -kInf);
                if (auto e = longIdx.query(q)) {
                    catalog.push_back({s, t, e->w});
                    catalogIv.push_back(Interval{e->x, e->y, e->w});
                }
            }
    }

    void build_candidates() {
        // opt~ may be infinite when the base instance is infeasible; the total
        // weight also bounds any cover that free intervals might complete.
        double optT = std::min(est, totalWeight);
        if (!(optT > 0)) return;
        double nn = static_cast<double>(std::max<size_t>(nEpoch, 2));
        d1 = (eps / 4) * optT / std::pow(nn, kOptMinusPower);
        double g = 1 + kidEps / 2;
        int m = bucket_of((3 + eps) * optT, d1, g);
        if (m > kMaxBuckets)
            throw Error(ErrorCode::TooLarge, "weight grid needs " + std::to_string(m) + " buckets");
        auto collect = [&](const auto& byW, bool left, std::vector<Cand>& out) {
            int curBucket = 0;
            for (auto& [w, set] : byW) {
                int bi = bucket_of(w, d1, g);
                if (bi > m) break;
                Cand c;
                c.w = w;
                c.real = true;
                if (left) {
                    auto [b, negA] = *set.rbegin();
                    c.end = b;
                    c.iv = Interval{-negA, b, w};
                } else {
                    auto [a, b] = *set.begin();
                    c.end = a;
                    c.iv = Interval{a, b, w};
                }
                if (bi != curBucket) {
                    out.push_back(c);
                    curBucket = bi;
                } else if (left ? c.end > out.back().end : c.end < out.back().end) {
                    out.back() = c;
                }
            }
        };
        collect(leftByW, true, leftCands);
        collect(rightByW, false, rightCands);
    }

    // Candidates after normalizing to points and dropping dominated ones; the
    // free interval (or the empty sentinel) comes first with weight 0.
    std::vector<Cand> pruned(bool left, double base) const {
        std::vector<Cand> out;
        Cand b0;
        b0.end = base;
        out.push_back(b0);
        for (const Cand& c : left ? leftCands : rightCands) {
            Cand d = c;
            d.end = left ? norm_left(c.end) : norm_right(c.end);
            if (left ? d.end > out.back().end : d.end < out.back().end) out.push_back(d);
        }
        return out;
    }

    const Choice& solve(double bL, double aR) {
        prepare();
        double nb = norm_left(bL), na = norm_right(aR);
        auto first = nb == -kInf ? pts.begin() : pts.upper_bound(nb);
        if (first == pts.end() || first->first >= na) nb = kInf, na = -kInf;  // nothing left to cover
        auto key = std::make_pair(nb, na);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        Choice ch;
        if (nb == kInf) {
            // empty choice
        } else if (leaf()) {
            solve_leaf(nb, na, ch);
        } else {
            solve_pairs(nb, na, ch);
        }
        return memo.emplace(key, std::move(ch)).first->second;
    }

    void solve_leaf(double nb, double na, Choice& ch) const {
        std::vector<Point> need;
        for (auto it = nb == -kInf ? pts.begin() : pts.upper_bound(nb); it != pts.end() && it->first < na; ++it)
            need.push_back({it->first, 0});
        auto r = exact_interval_weighted(need, interval_list());
        if (!r.feasible) {
            ch.cost = kInf;
            return;
        }
        ch.cost = r.cost;
        for (auto& w : r.witness) ch.own.push_back(std::get<Interval>(w));
        ch.size = ch.own.size();
    }

    void solve_pairs(double nb, double na, Choice& ch) {
        int k = static_cast<int>(kids.size());
        std::vector<Cand> Ls = pruned(true, nb), Rs = pruned(false, na);
        double lastPt = pts.rbegin()->first, firstPt = pts.begin()->first;
        ch.cost = kInf;
        std::vector<double> shortCost(k, kInf);
        for (const Cand& L : Ls) {
            int pL = L.end == -kInf ? 0 : L.end >= lastPt ? k : locate_ext(cuts, L.end);
            for (const Cand& R : Rs) {
                double base = L.w + R.w;
                if (base >= ch.cost) continue;
                int pR = R.end == kInf ? k - 1 : R.end <= firstPt ? -1 : locate_ext(cuts, R.end);
                double cost;
                DpResult dp;
                if (pL > pR) {
                    cost = base;
                } else if (pL == pR) {
                    cost = base + kids[pL]->solve(L.end, R.end).cost;
                } else {
                    for (int i = pL; i <= pR; i++)
                        shortCost[i] = kids[i]->solve(i == pL ? L.end : -kInf, i == pR ? R.end : kInf).cost;
                    dp = dp_over_portions(pL, pR, shortCost, catalog);
                    cost = base + dp.cost;
                }
                if (!(cost < ch.cost)) continue;
                ch.cost = cost;
                ch.own.clear();
                ch.kids.clear();
                if (L.real) ch.own.push_back(L.iv);
                if (R.real) ch.own.push_back(R.iv);
                if (pL == pR) {
                    ch.kids.push_back({pL, L.end, R.end});
                } else if (pL < pR) {
                    for (int e : dp.longsUsed) ch.own.push_back(catalogIv[e]);
                    for (int i : dp.shortUsed)
                        ch.kids.push_back({i, i == pL ? L.end : -kInf, i == pR ? R.end : kInf});
                }
            }
        }
        if (ch.cost == kInf) {
            ch.own.clear();
            ch.kids.clear();
            return;
        }
        ch.size = ch.own.size();
        for (auto& u : ch.kids) ch.size += kids[u.kid]->solve(u.bL, u.aR).size;
    }

    int64_t multiplicity(double bL, double aR, const Interval& iv) {
        const Choice& ch = solve(bL, aR);
        int64_t m = std::count(ch.own.begin(), ch.own.end(), iv);
        if (ch.kids.empty()) return m;
        int route[2];
        int cnt = route_interval(iv, cuts, route);
        for (auto& u : ch.kids)
            for (int j = 0; j < cnt; j++)
                if (u.kid == route[j]) m += kids[u.kid]->multiplicity(u.bL, u.aR, iv);
        return m;
    }

    void report(double bL, double aR, std::vector<Range>& out) {
        const Choice& ch = solve(bL, aR);
        if (ch.cost == kInf) return;
        out.insert(out.end(), ch.own.begin(), ch.own.end());
        for (auto& u : ch.kids) kids[u.kid]->report(u.bL, u.aR, out);
    }

    uint64_t fingerprint(uint64_t h) const {
        for (auto& [x, c] : pts) h = mix(mix(h, x), static_cast<double>(c));
        for (auto& [iv, c] : ivs) h = mix(mix(mix(mix(h, iv.a), iv.b), iv.w), static_cast<double>(c));
        for (auto& kid : kids) h = kid->fingerprint(mix(h, -1.0));
        return h;
    }
};

IntervalCoverW::IntervalCoverW(const Instance& inst, const ApproxParams& params) : inst_(inst), params_(params) {
    if (inst.kind != Kind::Interval1D || !inst.weighted)
        throw Error(ErrorCode::KindMismatch, "weighted interval structure needs a weighted interval instance");
    if (params.eps <= 0 || params.r < 2) throw Error(ErrorCode::ConfigError, "eps must be positive and r at least 2");
    root_ = std::make_unique<Node>();
    root_->params = &params_;
    root_->stats = &stats_;
    root_->lo = inst.pointRange.x0;
    root_->hi = inst.pointRange.x1;
    root_->eps = params.eps;
    for (auto& [p, c] : inst.points) {
        root_->pts[p.x] += c;
        root_->npts += c;
    }
    for (auto& [r, c] : inst.ranges) {
        root_->ivs[std::get<Interval>(r)] += c;
        root_->nivs += c;
    }
    root_->build();
}

IntervalCoverW::~IntervalCoverW() = default;

void IntervalCoverW::update(const UpdateOp& op) {
    if (op.action == Action::Snapshot) return;
    apply_update(inst_, op);
    switch (op.action) {
        case Action::InsertPoint: root_->update_point(op.point.x, true); break;
        case Action::DeletePoint: root_->update_point(op.point.x, false); break;
        case Action::InsertRange: root_->update_interval(std::get<Interval>(op.range), true); break;
        case Action::DeleteRange: root_->update_interval(std::get<Interval>(op.range), false); break;
        case Action::Snapshot: break;
    }
}

bool IntervalCoverW::feasible() { return root_->solve(-kInf, kInf).cost < kInf; }

double IntervalCoverW::cost() {
    double c = root_->solve(-kInf, kInf).cost;
    return c == kInf ? 0 : c;
}

size_t IntervalCoverW::size() { return root_->solve(-kInf, kInf).size; }

int64_t IntervalCoverW::multiplicity(const Range& r) {
    if (!std::holds_alternative<Interval>(r)) return 0;
    return root_->multiplicity(-kInf, kInf, std::get<Interval>(r));
}

std::vector<Range> IntervalCoverW::report() {
    std::vector<Range> out;
    root_->report(-kInf, kInf, out);
    return out;
}

double IntervalCoverW::opt_estimate() {
    root_->prepare();
    return root_->est;
}

double IntervalCoverW::delta1() {
    root_->prepare();
    return root_->d1;
}

std::vector<Interval> IntervalCoverW::left_candidates() {
    root_->prepare();
    std::vector<Interval> out;
    for (auto& c : root_->leftCands) out.push_back(c.iv);
    return out;
}

std::vector<Interval> IntervalCoverW::right_candidates() {
    root_->prepare();
    std::vector<Interval> out;
    for (auto& c : root_->rightCands) out.push_back(c.iv);
    return out;
}

double IntervalCoverW::child_eps() const { return root_->kidEps; }

int IntervalCoverW::portions() const { return root_->leaf() ? 0 : static_cast<int>(root_->kids.size()); }

uint64_t IntervalCoverW::fingerprint() const { return root_->fingerprint(1469598103934665603ULL); }

}  // namespace dyncover
