#include "dyncover/quadrant_weighted.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <set>
#include <tuple>

#include "dyncover/oracle.hpp"
#include "portions.hpp"
#include "quadrant_common.hpp"

namespace dyncover {

using detail::kSides;

int weight_bucket(double w) { return static_cast<int>(std::floor(std::log2(w))) + 1; }

namespace {

// Staircase order used by the DP.
constexpr int kNW = 0, kSW = 1, kNE = 2, kSE = 3;

int stair_of(Dir d) {
    switch (d) {
        case Dir::NW: return kNW;
        case Dir::SW: return kSW;
        case Dir::NE: return kNE;
        case Dir::SE: return kSE;
    }
    return 0;
}

bool stair_west(int s) { return s == kNW || s == kSW; }
bool stair_north(int s) { return s == kNW || s == kNE; }

double up(double v) { return std::nextafter(v, kInf); }
double down(double v) { return std::nextafter(v, -kInf); }

bool empty_rect(const Rect& r) { return r.x0 > r.x1 || r.y0 > r.y1; }

Rect intersect(const Rect& a, const Rect& b) {
    return {std::max(a.x0, b.x0), std::min(a.x1, b.x1), std::max(a.y0, b.y0), std::min(a.y1, b.y1)};
}

double total_weight(const std::vector<Quadrant>& qs) {
    double w = 0;
    for (auto& q : qs) w += q.w;
    return w;
}

using RectKey = std::tuple<double, double, double, double, bool>;

struct LongPart {
    Quadrant q;
    int line;  // west-facing: covers columns < line; east-facing: columns >= line
};

// Shape of a 4-dimensional dense array.
struct Shape {
    std::array<size_t, 4> n{1, 1, 1, 1};
    size_t size() const { return n[0] * n[1] * n[2] * n[3]; }
    size_t at(size_t a, size_t b, size_t c, size_t d) const { return ((a * n[1] + b) * n[2] + c) * n[3] + d; }
};

}  // namespace

struct QuadrantCoverW::Node {
    const ApproxParams* params = nullptr;
    CoverStats* stats = nullptr;
    int* r = nullptr;
    int K = 1;
    int maxDepth = 4;
    Region region;
    int depth = 0;

    std::map<Point, int64_t> pts;
    size_t npts = 0;
    RangeMinMax2D ptIndex{RangeMinMax2D::Mode::MinWeight};
    std::map<Point, uint64_t> ptHandle;

    std::map<Quadrant, int64_t> quads;
    size_t nq = 0;
    // Index k holds quadrants of weight below 2^k.
    std::vector<QuadrantDominanceIndex> domT, domN;
    QuadrantContainmentIndex contT, contN;
    std::set<Quadrant> inherited;  // maximal quadrants handed down by the parent

    // Grid; kids are rows, then columns.
    int R = 0, C = 0;
    std::vector<double> xs, ys;
    std::vector<std::unique_ptr<Node>> kids;
    std::array<std::vector<LongPart>, 4> longCat;
    bool catalogDirty = true;

    struct Answer {
        double cost = 0;
        int guess = -1;
        std::vector<Range> witness;  // leaves only
    };
    std::map<RectKey, Answer> memo;

    size_t nEpoch = 0, epochCount = 0;

    size_t n() const { return npts + nq; }
    bool leaf() const { return kids.empty(); }
    bool trivial(const Quadrant& q) const { return !region.inside(q.vx, q.vy); }
    Node& row(int i) { return *kids[i]; }
    Node& col(int j) { return *kids[R + j]; }

    Rect full_rect() const {
        const Rect& b = region.box;
        return {b.x0, region.closedRight ? b.x1 : down(b.x1), b.y0, region.closedTop ? b.y1 : down(b.y1)};
    }
    double row_hi(int i) const { return i == R - 1 ? full_rect().y1 : down(ys[i + 1]); }
    double col_hi(int j) const { return j == C - 1 ? full_rect().x1 : down(xs[j + 1]); }
    Rect row_rect(int i) const { return {region.box.x0, full_rect().x1, ys[i], row_hi(i)}; }
    Rect col_rect(int j) const { return {xs[j], col_hi(j), region.box.y0, full_rect().y1}; }

    // ------------------------------------------------------------ indexes

    void index_quad(const Quadrant& q, bool add) {
        bool triv = trivial(q);
        auto& dom = triv ? domT : domN;
        auto& cont = triv ? contT : contN;
        for (int k = std::max(1, weight_bucket(q.w)); k <= K; k++) add ? dom[k].insert(q) : dom[k].erase(q);
        add ? cont.insert(q) : cont.erase(q);
    }

    std::vector<Quadrant> maximal(const Rect& box, int k, bool triv) const {
        std::vector<Quadrant> out;
        if (k <= 0) return out;
        const auto& dom = triv ? domT : domN;
        const auto& cont = triv ? contT : contN;
        if (auto c = cont.query(box); c && weight_bucket(c->w) <= k) return {*c};
        for (Side s : kSides)
            if (auto q = dom[k].query(box, s); q && std::find(out.begin(), out.end(), *q) == out.end()) out.push_back(*q);
        std::sort(out.begin(), out.end());
        return out;
    }

    std::set<Quadrant> catalog_for(const Node& kid) const {
        std::set<Quadrant> out;
        for (int k = 1; k <= K; k++)
            for (auto& q : maximal(kid.region.box, k, false)) out.insert(q);
        return out;
    }

    // ------------------------------------------------------------ build and updates

    void touch() {
        memo.clear();
        rowRanges.clear();
        catalogDirty = true;
    }

    void build() {
        ptIndex.clear();
        ptHandle.clear();
        for (auto& [p, c] : pts) ptHandle[p] = ptIndex.insert(p.x, p.y, p.x);
        domT.assign(K + 1, QuadrantDominanceIndex());
        domN.assign(K + 1, QuadrantDominanceIndex());
        contT = QuadrantContainmentIndex();
        contN = QuadrantContainmentIndex();
        for (auto& [q, c] : quads) index_quad(q, true);
        kids.clear();
        xs.clear();
        ys.clear();
        R = C = 0;
        touch();
        nEpoch = n();
        epochCount = 0;
        if (depth >= maxDepth || n() <= params->baseThreshold) return;

        std::vector<double> cx, cy;
        for (auto& [p, c] : pts) {
            cx.insert(cx.end(), c, p.x);
            cy.insert(cy.end(), c, p.y);
        }
        for (auto& [q, c] : quads)
            if (!trivial(q)) {
                cx.insert(cx.end(), c, q.vx);
                cy.insert(cy.end(), c, q.vy);
            }
        const Rect& b = region.box;
        auto gx = detail::choose_cuts(std::move(cx), b.x0, b.x1, *r);
        auto gy = detail::choose_cuts(std::move(cy), b.y0, b.y1, *r);
        if (gx.size() < 3 || gy.size() < 3) return;
        xs = std::move(gx);
        ys = std::move(gy);
        C = static_cast<int>(xs.size()) - 1;
        R = static_cast<int>(ys.size()) - 1;

        auto make = [&](Rect box, bool closedRight, bool closedTop) {
            auto kid = std::make_unique<Node>();
            kid->params = params;
            kid->stats = stats;
            kid->r = r;
            kid->K = K;
            kid->maxDepth = maxDepth;
            kid->region = {box, closedRight, closedTop};
            kid->depth = depth + 1;
            kids.push_back(std::move(kid));
        };
        for (int i = 0; i < R; i++) make({b.x0, b.x1, ys[i], ys[i + 1]}, region.closedRight, i == R - 1 && region.closedTop);
        for (int j = 0; j < C; j++) make({xs[j], xs[j + 1], b.y0, b.y1}, j == C - 1 && region.closedRight, region.closedTop);

        for (auto& [p, c] : pts)
            for (Node* k : route(p.x, p.y)) {
                k->pts[p] += c;
                k->npts += c;
            }
        for (auto& [q, c] : quads)
            if (!trivial(q))
                for (Node* k : route(q.vx, q.vy)) {
                    k->quads[q] += c;
                    k->nq += c;
                }
        for (auto& k : kids) {
            k->inherited = catalog_for(*k);
            for (auto& q : k->inherited) {
                k->quads[q]++;
                k->nq++;
            }
        }
        for (auto& k : kids) k->build();
    }

    std::array<Node*, 2> route(double x, double y) {
        return {&row(detail::locate_ext(ys, y)), &col(detail::locate_ext(xs, x))};
    }

    void rebuild() {
        stats->nodeRebuilds++;
        if (depth == 0) {
            stats->rootRebuilds++;
            *r = std::max(2, static_cast<int>(std::ceil(std::pow(2.0 * static_cast<double>(n()), params->deltaExp))));
        }
        build();
    }

    bool epoch_tick() {
        if (++epochCount < std::max<size_t>(1, nEpoch / static_cast<size_t>(*r))) return false;
        rebuild();
        return true;
    }

    void update_point(const Point& p, bool insert) {
        if (insert) {
            if (pts[p]++ == 0) ptHandle[p] = ptIndex.insert(p.x, p.y, p.x);
            npts++;
        } else {
            if (--pts[p] == 0) {
                pts.erase(p);
                ptIndex.erase(ptHandle.at(p));
                ptHandle.erase(p);
            }
            npts--;
        }
        touch();
        if (epoch_tick() || leaf()) return;
        for (Node* k : route(p.x, p.y)) {
            stats->childUpdates++;
            k->update_point(p, insert);
        }
    }

    void update_quad(const Quadrant& q, bool insert) {
        if (insert) {
            if (quads[q]++ == 0) index_quad(q, true);
            nq++;
        } else {
            if (--quads[q] == 0) {
                quads.erase(q);
                index_quad(q, false);
            }
            nq--;
        }
        touch();
        if (epoch_tick() || leaf() || trivial(q)) return;
        for (Node* k : route(q.vx, q.vy)) {
            stats->childUpdates++;
            k->update_quad(q, insert);
        }
        for (auto& kp : kids) {
            Node& k = *kp;
            std::set<Quadrant> fresh = catalog_for(k);
            if (fresh == k.inherited) continue;
            std::set<Quadrant> old = std::move(k.inherited);
            k.inherited = fresh;
            for (auto& o : old)
                if (!fresh.count(o)) {
                    stats->childUpdates++;
                    k.update_quad(o, false);
                }
            for (auto& f : fresh)
                if (!old.count(f)) {
                    stats->childUpdates++;
                    k.update_quad(f, true);
                }
        }
    }

    // ------------------------------------------------------------ staircase DP

    void build_long_catalog() {
        std::map<std::tuple<int, int, int>, Quadrant> best;
        for (auto& [q, c] : quads) {
            if (trivial(q)) continue;
            int s = stair_of(q.dir);
            int m;
            if (stair_west(s)) {
                m = static_cast<int>(std::upper_bound(xs.begin(), xs.end(), q.vx) - xs.begin()) - 1;
                if (m <= 0) continue;
            } else {
                m = static_cast<int>(std::lower_bound(xs.begin(), xs.end(), q.vx) - xs.begin());
                if (m >= C) continue;
            }
            auto key = std::make_tuple(s, m, weight_bucket(q.w));
            auto it = best.find(key);
            if (it == best.end()) {
                best.emplace(key, q);
                continue;
            }
            const Quadrant& o = it->second;
            bool further = stair_north(s) ? q.vy < o.vy : q.vy > o.vy;
            if (further || (q.vy == o.vy && std::tie(q.w, q) < std::tie(o.w, o))) it->second = q;
        }
        for (auto& v : longCat) v.clear();
        for (auto& [key, q] : best) longCat[std::get<0>(key)].push_back({q, std::get<1>(key)});
    }

    // Candidates of one row range. Entry 0 of each staircase is the null element.
    struct Ctx {
        int i = 0, k = 0;
        double Y0 = 0, Y1 = 0;
        std::array<std::vector<Quadrant>, 4> cands;
        std::array<std::vector<int>, 4> lines;
        std::array<std::vector<double>, 4> cov;
        Shape shape;
    };

    Ctx make_ctx(int i, int k) const {
        Ctx x;
        x.i = i;
        x.k = k;
        x.Y0 = ys[i];
        x.Y1 = row_hi(k);
        for (int s = 0; s < 4; s++) {
            bool north = stair_north(s), west = stair_west(s);
            struct Item {
                Quadrant q;
                int line;
                double cov;
            };
            std::vector<Item> items;
            for (auto& e : longCat[s]) {
                if (north ? e.q.vy > x.Y1 : e.q.vy < x.Y0) continue;
                items.push_back({e.q, e.line, north ? std::max(e.q.vy, x.Y0) : std::min(e.q.vy, x.Y1)});
            }
            // Drop parts another part beats on reach, coverage and weight at once.
            auto beats = [&](const Item& a, const Item& b) {
                bool reach = west ? a.line >= b.line : a.line <= b.line;
                bool cover = north ? a.cov <= b.cov : a.cov >= b.cov;
                if (!reach || !cover || a.q.w > b.q.w) return false;
                bool same = a.line == b.line && a.cov == b.cov && a.q.w == b.q.w;
                return !same || a.q < b.q;
            };
            x.cands[s] = {Quadrant{}};
            x.lines[s] = {-1};
            x.cov[s] = {north ? kInf : -kInf};
            for (size_t a = 0; a < items.size(); a++) {
                bool dominated = false;
                for (size_t b = 0; b < items.size() && !dominated; b++) dominated = b != a && beats(items[b], items[a]);
                if (dominated) continue;
                x.cands[s].push_back(items[a].q);
                x.lines[s].push_back(items[a].line);
                x.cov[s].push_back(items[a].cov);
            }
            x.shape.n[s] = x.cands[s].size();
        }
        return x;
    }

    bool valid_at(const Ctx& x, int s, size_t idx, int c) const {
        if (idx == 0) return true;
        return stair_west(s) ? x.lines[s][idx] >= c + 1 : x.lines[s][idx] <= c;
    }

    // Band of column c inside the row range left open by the four staircase elements.
    Rect band(const Ctx& x, int c, size_t nw, size_t sw, size_t ne, size_t se) const {
        double lowN = std::min(x.cov[kNW][nw], x.cov[kNE][ne]);
        double highS = std::max(x.cov[kSW][sw], x.cov[kSE][se]);
        double hi = lowN == kInf ? x.Y1 : std::min(x.Y1, down(lowN));
        double lo = highS == -kInf ? x.Y0 : std::max(x.Y0, up(highS));
        return {xs[c], col_hi(c), lo, hi};
    }

    std::vector<double> column_costs(const Ctx& x, int c) {
        const Shape& sh = x.shape;
        std::vector<double> out(sh.size(), kInf);
        std::map<std::pair<double, double>, double> cache;
        for (size_t a = 0; a < sh.n[0]; a++) {
            if (!valid_at(x, kNW, a, c)) continue;
            for (size_t b = 0; b < sh.n[1]; b++) {
                if (!valid_at(x, kSW, b, c)) continue;
                for (size_t e = 0; e < sh.n[2]; e++) {
                    if (!valid_at(x, kNE, e, c)) continue;
                    for (size_t d = 0; d < sh.n[3]; d++) {
                        if (!valid_at(x, kSE, d, c)) continue;
                        Rect t = band(x, c, a, b, e, d);
                        double v = 0;
                        if (!empty_rect(t)) {
                            auto key = std::make_pair(t.y0, t.y1);
                            auto it = cache.find(key);
                            if (it == cache.end()) it = cache.emplace(key, col(c).answer(t, true).cost).first;
                            v = it->second;
                        }
                        out[sh.at(a, b, e, d)] = v;
                    }
                }
            }
        }
        return out;
    }

    // min over predecessors of prev + sum of weights of newly appearing elements.
    // h[mask] is prev minimized over the staircases outside mask; matching the
    // staircases in mask is free and every other one pays its new element.
    std::vector<double> transition(const Ctx& x, const std::vector<double>& prev) const {
        const auto& n = x.shape.n;
        thread_local std::array<std::vector<double>, 16> h;
        std::array<std::array<size_t, 4>, 16> stride{};
        for (int m = 0; m < 16; m++) {
            size_t st = 1;
            for (int d = 3; d >= 0; d--) {
                stride[m][d] = (m >> d & 1) ? st : 0;
                if (m >> d & 1) st *= n[d];
            }
        }
        h[15] = prev;
        for (int m = 14; m >= 0; m--) {
            int bit = 0;
            while (m >> bit & 1) bit++;
            const std::vector<double>& ph = h[m | (1 << bit)];
            // Parent layout is A x n[bit] x B with the reduced dimension in the middle.
            size_t A = 1, B = 1;
            for (int d = 0; d < bit; d++)
                if (m >> d & 1) A *= n[d];
            for (int d = bit + 1; d < 4; d++)
                if (m >> d & 1) B *= n[d];
            size_t nb = n[bit];
            auto& out = h[m];
            out.assign(A * B, kInf);
            for (size_t a = 0; a < A; a++)
                for (size_t j = 0; j < nb; j++) {
                    const double* src = ph.data() + (a * nb + j) * B;
                    double* dst = out.data() + a * B;
                    for (size_t b = 0; b < B; b++) dst[b] = std::min(dst[b], src[b]);
                }
        }
        std::array<std::vector<double>, 4> w;
        for (int d = 0; d < 4; d++) {
            w[d].assign(n[d], 0);
            for (size_t i = 1; i < n[d]; i++) w[d][i] = x.cands[d][i].w;
        }
        std::vector<double> out(x.shape.size(), kInf);
        std::array<size_t, 16> i0, i1, i2;
        std::array<double, 16> w0, w1, w2;
        size_t s = 0;
        for (size_t a = 0; a < n[0]; a++) {
            for (int m = 0; m < 16; m++) {
                i0[m] = a * stride[m][0];
                w0[m] = (m & 1) ? 0 : w[0][a];
            }
            for (size_t b = 0; b < n[1]; b++) {
                for (int m = 0; m < 16; m++) {
                    i1[m] = i0[m] + b * stride[m][1];
                    w1[m] = w0[m] + ((m & 2) ? 0 : w[1][b]);
                }
                for (size_t c = 0; c < n[2]; c++) {
                    for (int m = 0; m < 16; m++) {
                        i2[m] = i1[m] + c * stride[m][2];
                        w2[m] = w1[m] + ((m & 4) ? 0 : w[2][c]);
                    }
                    for (size_t d = 0; d < n[3]; d++, s++) {
                        double best = kInf;
                        for (int m = 0; m < 16; m++) {
                            double v = h[m][i2[m] + d * stride[m][3]] + w2[m] + ((m & 8) ? 0 : w[3][d]);
                            best = std::min(best, v);
                        }
                        out[s] = best;
                    }
                }
            }
        }
        return out;
    }

    // Sweeps columns j..last; returns f per column.
    std::vector<std::vector<double>> sweep(const Ctx& x, int j, int last, const std::vector<std::vector<double>>& colCost) const {
        std::vector<std::vector<double>> f;
        std::vector<double> prev(x.shape.size(), kInf);
        prev[0] = 0;
        for (int c = j; c <= last; c++) {
            f.push_back(step(x, prev, colCost[c]));
            prev = f.back();
        }
        return f;
    }

    std::vector<double> step(const Ctx& x, const std::vector<double>& prev, const std::vector<double>& cc) const {
        std::vector<double> cur = transition(x, prev);
        for (size_t s = 0; s < cur.size(); s++) cur[s] = cc[s] == kInf ? kInf : cur[s] + cc[s];
        return cur;
    }

    std::vector<std::vector<double>> all_column_costs(const Ctx& x, int j = 0, int l = -1) {
        std::vector<std::vector<double>> cc(C);
        for (int c = j; c <= (l < 0 ? C - 1 : l); c++) cc[c] = column_costs(x, c);
        return cc;
    }

    // Grid rectangle costs of one row range, filled on demand until the next change.
    struct Sweep {
        std::vector<double> f;     // f after the last swept column
        std::vector<double> best;  // best[l - j]
    };
    struct RowRange {
        Ctx x;
        std::vector<std::vector<double>> cc;  // per column, empty until needed
        std::map<int, Sweep> sweeps;          // keyed by the first column
    };
    std::map<std::pair<int, int>, RowRange> rowRanges;

    RowRange& row_range(int i, int k) {
        if (catalogDirty) {
            build_long_catalog();
            catalogDirty = false;
        }
        auto [it, fresh] = rowRanges.try_emplace({i, k});
        if (fresh) {
            it->second.x = make_ctx(i, k);
            it->second.cc.resize(C);
        }
        return it->second;
    }

    const std::vector<double>& column_cost(RowRange& rr, int c) {
        if (rr.cc[c].empty()) rr.cc[c] = column_costs(rr.x, c);
        return rr.cc[c];
    }

    double grid_cost(int i, int k, int j, int l) {
        RowRange& rr = row_range(i, k);
        Sweep& sw = rr.sweeps[j];
        if (sw.f.empty()) {
            sw.f.assign(rr.x.shape.size(), kInf);
            sw.f[0] = 0;
        }
        while (static_cast<int>(sw.best.size()) <= l - j) {
            int c = j + static_cast<int>(sw.best.size());
            sw.f = step(rr.x, sw.f, column_cost(rr, c));
            sw.best.push_back(*std::min_element(sw.f.begin(), sw.f.end()));
        }
        return sw.best[l - j];
    }

    double dp_fresh(int i, int k, int j, int l) {
        build_long_catalog();
        Ctx x = make_ctx(i, k);
        auto cc = all_column_costs(x, j, l);
        auto f = sweep(x, j, l, cc);
        return *std::min_element(f.back().begin(), f.back().end());
    }

    void dp_report(int i, int k, int j, int l, std::vector<Range>& out) {
        RowRange& rr = row_range(i, k);
        const Ctx& x = rr.x;
        std::vector<std::vector<double>> cc(C);
        for (int c = j; c <= l; c++) cc[c] = column_cost(rr, c);
        auto f = sweep(x, j, l, cc);
        const Shape& sh = x.shape;
        auto& last = f.back();
        size_t s = static_cast<size_t>(std::min_element(last.begin(), last.end()) - last.begin());
        if (last[s] == kInf) return;
        auto unpack = [&](size_t v) {
            std::array<size_t, 4> a;
            for (int d = 3; d >= 0; d--) {
                a[d] = v % sh.n[d];
                v /= sh.n[d];
            }
            return a;
        };
        std::vector<double> start(sh.size(), kInf);
        start[0] = 0;
        for (int c = l; c >= j; c--) {
            const auto& prev = c == j ? start : f[c - 1 - j];
            auto cur = unpack(s);
            double target = f[c - j][s] - cc[c][s];
            size_t from = 0;
            double best = kInf;
            for (size_t p = 0; p < prev.size(); p++) {
                if (prev[p] == kInf) continue;
                auto pi = unpack(p);
                double v = prev[p];
                for (int d = 0; d < 4; d++)
                    if (pi[d] != cur[d] && cur[d] != 0) v += x.cands[d][cur[d]].w;
                if (v < best) {
                    best = v;
                    from = p;
                }
                if (v == target) break;
            }
            auto pi = unpack(from);
            for (int d = 0; d < 4; d++)
                if (pi[d] != cur[d] && cur[d] != 0) out.push_back(x.cands[d][cur[d]]);
            Rect t = band(x, c, cur[0], cur[1], cur[2], cur[3]);
            if (!empty_rect(t)) col(c).report(t, true, out);
            s = from;
        }
    }

    QuadrantCoverW::DpTrace trace(int i, int k, int j) {
        build_long_catalog();
        Ctx x = make_ctx(i, k);
        auto cc = all_column_costs(x, j);
        QuadrantCoverW::DpTrace t;
        t.cands = x.cands;
        t.dims = x.shape.n;
        t.f = sweep(x, j, C - 1, cc);
        t.colCost.assign(cc.begin() + j, cc.end());
        return t;
    }

    // ------------------------------------------------------------ queries

    struct Part {
        int kid = -1;  // -1: grid rectangle a..b x c..d
        Rect rect;
        int a = 0, b = 0, c = 0, d = 0;
    };

    std::vector<Part> decompose(Rect t) const {
        std::vector<Part> parts;
        t = intersect(t, full_rect());
        if (empty_rect(t)) return parts;
        int rlo = detail::locate_ext(ys, t.y0), rhi = detail::locate_ext(ys, t.y1);
        int a = t.y0 <= ys[rlo] ? rlo : rlo + 1;
        int b = row_hi(rhi) <= t.y1 ? rhi : rhi - 1;
        if (a > b) {
            for (int i = rlo; i <= rhi; i++) parts.push_back({i, intersect(t, row_rect(i))});
            return parts;
        }
        if (a > rlo) parts.push_back({rlo, intersect(t, row_rect(rlo))});
        if (b < rhi) parts.push_back({rhi, intersect(t, row_rect(rhi))});
        Rect mid{t.x0, t.x1, ys[a], row_hi(b)};
        int clo = detail::locate_ext(xs, mid.x0), chi = detail::locate_ext(xs, mid.x1);
        int c = mid.x0 <= xs[clo] ? clo : clo + 1;
        int d = col_hi(chi) <= mid.x1 ? chi : chi - 1;
        if (c > d) {
            for (int j = clo; j <= chi; j++) parts.push_back({R + j, intersect(mid, col_rect(j))});
            return parts;
        }
        if (c > clo) parts.push_back({R + clo, intersect(mid, col_rect(clo))});
        if (d < chi) parts.push_back({R + chi, intersect(mid, col_rect(chi))});
        parts.push_back({-1, mid, a, b, c, d});
        return parts;
    }

    std::vector<std::vector<Quadrant>> guesses(bool shortOnly) const {
        std::vector<std::vector<Quadrant>> out{{}};
        if (shortOnly) return out;
        for (int k = 1; k <= K; k++) {
            auto m = maximal(region.box, k, true);
            if (m != out.back()) out.push_back(std::move(m));
        }
        return out;
    }

    // t minus the union of the maximal quadrants.
    Rect cut(Rect t, const std::vector<Quadrant>& M) const {
        const Rect& b = region.box;
        for (auto& q : M) {
            if (contains_rect(q, b)) return {1, 0, 1, 0};
            if (intersects_side(q, b, Side::Left)) t.x0 = std::max(t.x0, up(q.vx));
            else if (intersects_side(q, b, Side::Right)) t.x1 = std::min(t.x1, down(q.vx));
            else if (intersects_side(q, b, Side::Top)) t.y1 = std::min(t.y1, down(q.vy));
            else if (intersects_side(q, b, Side::Bottom)) t.y0 = std::max(t.y0, up(q.vy));
        }
        return t;
    }

    bool any_point(const Rect& t) const { return !empty_rect(t) && ptIndex.query(t).has_value(); }

    void leaf_solve(const Rect& t, bool shortOnly, Answer& a) const {
        std::vector<Point> ps;
        for (auto& [p, c] : pts)
            if (t.x0 <= p.x && p.x <= t.x1 && t.y0 <= p.y && p.y <= t.y1) ps.push_back(p);
        std::vector<Quadrant> qs;
        std::vector<std::vector<char>> cover;
        for (auto& [q, c] : quads) {
            if (shortOnly && trivial(q)) continue;
            std::vector<char> m(ps.size());
            bool any = false;
            for (size_t i = 0; i < ps.size(); i++) any |= (m[i] = q.contains(ps[i]));
            if (!any) continue;
            qs.push_back(q);
            cover.push_back(std::move(m));
        }
        std::vector<Range> keep;
        for (size_t i = 0; i < qs.size(); i++) {
            bool dominated = false;
            for (size_t j = 0; j < qs.size() && !dominated; j++) {
                if (j == i || qs[j].w > qs[i].w || (qs[j].w == qs[i].w && j > i)) continue;
                bool sub = true;
                for (size_t p = 0; p < ps.size() && sub; p++) sub = !cover[i][p] || cover[j][p];
                dominated = sub;
            }
            if (!dominated) keep.push_back(qs[i]);
        }
        OracleResult res = keep.size() <= 16 ? exact_bruteforce(ps, keep, 16) : greedy_baseline(ps, keep);
        a.cost = res.feasible ? res.cost : kInf;
        if (res.feasible) a.witness = std::move(res.witness);
    }

    Answer answer(const Rect& query, bool shortOnly) {
        Rect t = intersect(query, full_rect());
        RectKey key{t.x0, t.x1, t.y0, t.y1, shortOnly};
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        Answer a;
        if (!any_point(t)) {
            a.cost = 0;
        } else if (leaf()) {
            leaf_solve(t, shortOnly, a);
        } else {
            a.cost = kInf;
            auto gs = guesses(shortOnly);
            for (size_t g = 0; g < gs.size(); g++) {
                double v = total_weight(gs[g]);
                for (auto& p : decompose(cut(t, gs[g]))) {
                    if (v == kInf) break;
                    v += p.kid < 0 ? grid_cost(p.a, p.b, p.c, p.d) : kids[p.kid]->answer(p.rect, false).cost;
                }
                if (v < a.cost) {
                    a.cost = v;
                    a.guess = static_cast<int>(g);
                }
            }
        }
        memo.emplace(key, a);
        return a;
    }

    void report(const Rect& query, bool shortOnly, std::vector<Range>& out) {
        Answer a = answer(query, shortOnly);
        if (a.cost == 0 || a.cost == kInf) return;
        if (leaf()) {
            out.insert(out.end(), a.witness.begin(), a.witness.end());
            return;
        }
        Rect t = intersect(query, full_rect());
        auto M = guesses(shortOnly)[a.guess];
        out.insert(out.end(), M.begin(), M.end());
        for (auto& p : decompose(cut(t, M))) {
            if (p.kid >= 0) kids[p.kid]->report(p.rect, false, out);
            else if (grid_cost(p.a, p.b, p.c, p.d) > 0) dp_report(p.a, p.b, p.c, p.d, out);
        }
    }

    void hash_into(uint64_t& h) const {
        auto mix = [&](double v) {
            uint64_t bits;
            std::memcpy(&bits, &v, sizeof bits);
            h = (h ^ bits) * 1099511628211ull;
        };
        for (auto& [p, c] : pts) {
            mix(p.x);
            mix(p.y);
            mix(static_cast<double>(c));
        }
        for (auto& [q, c] : quads) {
            mix(static_cast<double>(q.dir));
            mix(q.vx);
            mix(q.vy);
            mix(q.w);
            mix(static_cast<double>(c));
        }
        for (auto& k : kids) k->hash_into(h);
    }
};

// ---------------------------------------------------------------------------

QuadrantCoverW::QuadrantCoverW(const Instance& inst, const ApproxParams& params) : inst_(inst), params_(params) {
    if (inst.kind != Kind::Quadrant2D || !inst.weighted)
        throw Error(ErrorCode::KindMismatch, "weighted quadrant structure needs a weighted quadrant instance");
    if (!(params.deltaExp > 0 && params.deltaExp <= 1) || params.U < 1)
        throw Error(ErrorCode::ConfigError, "deltaExp must be in (0, 1] and U at least 1");
    for (auto& [r, c] : inst.ranges) check_weight(r);
    build_root();
}

QuadrantCoverW::~QuadrantCoverW() = default;

void QuadrantCoverW::check_weight(const Range& r) const {
    double w = weight_of(r);
    if (!(w >= 1 && w <= static_cast<double>(params_.U) && w == std::floor(w)))
        throw Error(ErrorCode::WeightOutOfRange, "weighted quadrants need integer weights in [1, U]");
}

void QuadrantCoverW::build_root() {
    r_ = std::max(2, static_cast<int>(std::ceil(std::pow(2.0 * static_cast<double>(inst_.size()), params_.deltaExp))));
    root_ = std::make_unique<Node>();
    root_->params = &params_;
    root_->stats = &stats_;
    root_->r = &r_;
    root_->K = weight_bucket(static_cast<double>(params_.U));
    root_->maxDepth = static_cast<int>(std::ceil(1 / params_.deltaExp));
    root_->region = {inst_.pointRange, true, true};
    for (auto& [p, c] : inst_.points) {
        root_->pts[p] += c;
        root_->npts += c;
    }
    for (auto& [r, c] : inst_.ranges) {
        root_->quads[std::get<Quadrant>(r)] += c;
        root_->nq += c;
    }
    root_->build();
}

void QuadrantCoverW::update(const UpdateOp& op) {
    if (op.action == Action::Snapshot) return;
    if (op.action == Action::InsertRange || op.action == Action::DeleteRange) {
        if (std::holds_alternative<Quadrant>(op.range)) check_weight(op.range);
    }
    apply_update(inst_, op);
    reported_.reset();
    switch (op.action) {
        case Action::InsertPoint: root_->update_point(op.point, true); break;
        case Action::DeletePoint: root_->update_point(op.point, false); break;
        case Action::InsertRange: root_->update_quad(std::get<Quadrant>(op.range), true); break;
        case Action::DeleteRange: root_->update_quad(std::get<Quadrant>(op.range), false); break;
        case Action::Snapshot: break;
    }
}

double QuadrantCoverW::query_rect(const Rect& t) { return root_->answer(t, false).cost; }

std::vector<Range> QuadrantCoverW::report_rect(const Rect& t) {
    std::vector<Range> out;
    root_->report(t, false, out);
    return out;
}

double QuadrantCoverW::cost() { return query_rect(root_->full_rect()); }

bool QuadrantCoverW::feasible() { return cost() < kInf; }

std::vector<Range> QuadrantCoverW::report() {
    if (!reported_) reported_ = report_rect(root_->full_rect());
    return *reported_;
}

size_t QuadrantCoverW::size() { return report().size(); }

int64_t QuadrantCoverW::multiplicity(const Range& r) {
    auto rep = report();
    return std::count(rep.begin(), rep.end(), r);
}

int QuadrantCoverW::grid_side() const { return root_->leaf() ? 0 : r_; }
int QuadrantCoverW::rows() const { return root_->R; }
int QuadrantCoverW::cols() const { return root_->C; }
const std::vector<double>& QuadrantCoverW::xcuts() const { return root_->xs; }
const std::vector<double>& QuadrantCoverW::ycuts() const { return root_->ys; }
int QuadrantCoverW::buckets() const { return root_->K; }

std::vector<Quadrant> QuadrantCoverW::maximal_trivial(int axis, int index, int k) const {
    if (axis < 0) return root_->maximal(root_->region.box, k, true);
    const Node& kid = axis == 0 ? *root_->kids[index] : *root_->kids[root_->R + index];
    return root_->maximal(kid.region.box, k, false);
}

double QuadrantCoverW::grid_rect_cost(int i, int j, int k, int l) {
    return root_->grid_cost(i, k, j, l);
}

double QuadrantCoverW::dp_grid_rect(int i, int j, int k, int l) { return root_->dp_fresh(i, k, j, l); }

std::vector<Range> QuadrantCoverW::dp_grid_rect_report(int i, int j, int k, int l) {
    std::vector<Range> out;
    root_->dp_report(i, k, j, l, out);
    return out;
}

QuadrantCoverW::DpTrace QuadrantCoverW::dp_trace(int i, int k, int j) { return root_->trace(i, k, j); }

uint64_t QuadrantCoverW::fingerprint() const {
    uint64_t h = 1469598103934665603ull;
    root_->hash_into(h);
    return h;
}

}  // namespace dyncover
