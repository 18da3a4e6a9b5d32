#include "dyncover/quadrant_unweighted.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <set>

#include "portions.hpp"
#include "quadrant_common.hpp"

namespace dyncover {

using detail::more_extreme;
using detail::kSides;

// ---------------------------------------------------------------------------
// QuadrantSweep

void QuadrantSweep::insert_point(const Point& p) {
    if (ptHandle_.count(p)) return;
    ptHandle_[p] = pts_.insert(p.x, p.y, p.x);
}

void QuadrantSweep::erase_point(const Point& p) {
    auto it = ptHandle_.find(p);
    if (it == ptHandle_.end()) throw Error(ErrorCode::DeleteMissing, "point not in sweep index");
    pts_.erase(it->second);
    ptHandle_.erase(it);
}

void QuadrantSweep::insert(const Quadrant& q) {
    if (qHandle_.count(q)) return;
    int d = static_cast<int>(q.dir);
    uint64_t h = 0;
    switch (q.dir) {
        case Dir::NE: h = dirs_[d].insert(q.vx, q.vy, q.vy); break;
        case Dir::NW: h = dirs_[d].insert(q.vx, q.vy, q.vx); break;
        case Dir::SE: h = dirs_[d].insert(q.vx, q.vy, q.vy); break;
        case Dir::SW: h = dirs_[d].insert(q.vx, -q.vy, q.vx); break;
    }
    qHandle_[q] = h;
}

void QuadrantSweep::erase(const Quadrant& q) {
    auto it = qHandle_.find(q);
    if (it == qHandle_.end()) throw Error(ErrorCode::DeleteMissing, "quadrant not in sweep index");
    dirs_[static_cast<int>(q.dir)].erase(it->second);
    qHandle_.erase(it);
}

void QuadrantSweep::clear() {
    pts_.clear();
    ptHandle_.clear();
    for (auto& d : dirs_) d.clear();
    qHandle_.clear();
}

namespace {

// Pick order within one direction; matches the index tie-breaks.
bool better_pick(Dir d, const Quadrant& a, const Quadrant& b) {
    switch (d) {
        case Dir::NE: return a.vy < b.vy || (a.vy == b.vy && a.vx < b.vx);
        case Dir::SE: return a.vy > b.vy || (a.vy == b.vy && a.vx < b.vx);
        case Dir::NW: return a.vx > b.vx || (a.vx == b.vx && a.vy < b.vy);
        case Dir::SW: return a.vx > b.vx || (a.vx == b.vx && a.vy > b.vy);
    }
    return false;
}

}  // namespace

std::optional<Quadrant> QuadrantSweep::pick(Dir d, const Point& p, const std::vector<Quadrant>& extra) const {
    Rect r;
    switch (d) {
        case Dir::NE: r = {-kInf, p.x, -kInf, p.y}; break;
        case Dir::SE: r = {-kInf, p.x, p.y, kInf}; break;
        case Dir::NW: r = {p.x, kInf, -kInf, p.y}; break;
        case Dir::SW: r = {p.x, kInf, -kInf, -p.y}; break;
    }
    std::optional<Quadrant> best;
    if (auto e = dirs_[static_cast<int>(d)].query(r)) best = Quadrant{d, e->x, d == Dir::SW ? -e->y : e->y, 1};
    for (auto& q : extra)
        if (q.dir == d && q.contains(p) && (!best || better_pick(d, q, *best))) best = q;
    return best;
}

QuadrantSweep::Result QuadrantSweep::run(double budget, const std::vector<Quadrant>& extra) const {
    Result res;
    std::set<Quadrant> chosen;
    // East-facing picks leave lo < y < hi uncovered to the right of the sweep.
    double lo = -kInf, hi = kInf;
    // West-facing picks by vertex x: (lowest NW vertex y, highest SW vertex y).
    std::map<double, std::pair<double, double>> west;

    auto first = pts_.query({-kInf, kInf, -kInf, kInf});
    std::optional<Point> cur;
    if (first) cur = Point{first->x, first->y};
    while (cur) {
        if (res.steps + 1 > budget) {
            res.status = Status::Exhausted;
            return res;
        }
        res.steps += 1;
        res.rounds++;
        bool any = false;
        for (Dir d : {Dir::NE, Dir::NW, Dir::SE, Dir::SW}) {
            auto q = pick(d, *cur, extra);
            if (!q) continue;
            any = true;
            chosen.insert(*q);
            switch (d) {
                case Dir::NE: hi = std::min(hi, q->vy); break;
                case Dir::SE: lo = std::max(lo, q->vy); break;
                case Dir::NW: {
                    auto [it, fresh] = west.try_emplace(q->vx, q->vy, -kInf);
                    if (!fresh) it->second.first = std::min(it->second.first, q->vy);
                    break;
                }
                case Dir::SW: {
                    auto [it, fresh] = west.try_emplace(q->vx, kInf, q->vy);
                    if (!fresh) it->second.second = std::max(it->second.second, q->vy);
                    break;
                }
            }
        }
        if (!any) {
            res.status = Status::Infeasible;
            res.picks.clear();
            return res;
        }

        // Segments between west-facing vertex coordinates, each with its own band.
        std::vector<double> keys, sufNw, sufSw;
        for (auto it = west.lower_bound(cur->x); it != west.end(); ++it) {
            keys.push_back(it->first);
            sufNw.push_back(it->second.first);
            sufSw.push_back(it->second.second);
        }
        for (size_t i = keys.size(); i-- > 1;) {
            sufNw[i - 1] = std::min(sufNw[i - 1], sufNw[i]);
            sufSw[i - 1] = std::max(sufSw[i - 1], sufSw[i]);
        }
        std::optional<Point> next;
        double xa = cur->x;
        int probes = 0;
        for (size_t i = 0; i <= keys.size() && !next; i++) {
            double xb = i < keys.size() ? keys[i] : kInf;
            double ylo = std::max(lo, i < keys.size() ? sufSw[i] : -kInf);
            double yhi = std::min(hi, i < keys.size() ? sufNw[i] : kInf);
            if (ylo < yhi) {
                Rect box{xa, xb, std::nextafter(ylo, kInf), std::nextafter(yhi, -kInf)};
                if (box.y0 <= box.y1) {
                    if (probes++) res.steps += 1;
                    if (auto e = pts_.query(box)) next = Point{e->x, e->y};
                }
            }
            if (xb == kInf) break;
            xa = std::nextafter(xb, kInf);
        }
        cur = next;
    }
    res.picks.assign(chosen.begin(), chosen.end());
    return res;
}

// ---------------------------------------------------------------------------
// Grid side

int quadrant_grid_side(size_t n, const ApproxParams& params) {
    int r = detail::quadrant_epoch_divisor(n, params);
    double cap = std::floor(std::sqrt(static_cast<double>(n) / static_cast<double>(std::max<size_t>(1, params.baseThreshold))));
    return std::min(r, static_cast<int>(cap));
}

// ---------------------------------------------------------------------------
// QuadrantCoverU

namespace {

using VKey = std::vector<Quadrant>;

bool in_key(const VKey& v, const Quadrant& q) { return std::binary_search(v.begin(), v.end(), q); }

}  // namespace

struct QuadrantCoverU::Node {
    const ApproxParams* params = nullptr;
    CoverStats* stats = nullptr;
    Region region;
    int depth = 0;
    double eps = 0.5;

    std::map<Point, int64_t> pts;
    std::map<Quadrant, int64_t> quads;
    size_t npts = 0, nq = 0;
    QuadrantSweep sweep;
    QuadrantDominanceIndex domTriv, domNon;
    QuadrantContainmentIndex contAll, contNon;

    // Grid; kids are cells (row-major), then rows, then columns.
    int side = 0, R = 0, C = 0;
    std::vector<double> xs, ys;
    std::vector<std::unique_ptr<Node>> kids;
    double kidEps = 0;
    // As a child: maximal partial intersectors per side, then one container.
    std::array<std::optional<Quadrant>, 5> specials;

    size_t nEpoch = 0, epochCount = 0;
    int divisor = 4;

    struct Solution {
        bool feasible = true;
        bool isExplicit = true;
        size_t size = 0;         // includes virtual members
        size_t virtualUsed = 0;  // members of top that were passed in
        std::vector<Quadrant> top;
        VKey annulusKey;
        std::vector<int> annulus;
        std::vector<int> cells;  // interior cells answered by their own solution, ascending
        std::map<Quadrant, int64_t> containers;
        std::map<Quadrant, int64_t> viaSpecial;  // trivial members of interior cell solutions
    };
    std::map<VKey, Solution> memo;

    size_t n() const { return npts + nq; }
    bool leaf() const { return kids.empty(); }
    bool trivial(const Quadrant& q) const { return !region.inside(q.vx, q.vy); }
    Node& cell(int i, int j) { return *kids[i * C + j]; }
    int row_index(int i) const { return R * C + i; }
    int col_index(int j) const { return R * C + R + j; }

    void add_indexes(const Quadrant& q) {
        sweep.insert(q);
        contAll.insert(q);
        if (trivial(q)) {
            domTriv.insert(q);
        } else {
            domNon.insert(q);
            contNon.insert(q);
        }
    }

    void remove_indexes(const Quadrant& q) {
        sweep.erase(q);
        contAll.erase(q);
        if (trivial(q)) {
            domTriv.erase(q);
        } else {
            domNon.erase(q);
            contNon.erase(q);
        }
    }

    std::optional<Quadrant> query_special(const Rect& box, int slot) const {
        if (slot < 4) return domNon.query(box, kSides[slot]);
        return contNon.query(box);
    }

    void build() {
        kids.clear();
        xs.clear();
        ys.clear();
        side = R = C = 0;
        memo.clear();
        sweep.clear();
        domTriv = QuadrantDominanceIndex();
        domNon = QuadrantDominanceIndex();
        contAll = QuadrantContainmentIndex();
        contNon = QuadrantContainmentIndex();
        for (auto& [p, c] : pts) sweep.insert_point(p);
        for (auto& [q, c] : quads) add_indexes(q);
        nEpoch = n();
        epochCount = 0;
        divisor = detail::quadrant_epoch_divisor(nEpoch, *params);
        if (depth >= params->gridMaxDepth) return;
        int r = quadrant_grid_side(n(), *params);
        if (r < 2) return;

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
        std::vector<double> gx = detail::choose_cuts(std::move(cx), b.x0, b.x1, r);
        std::vector<double> gy = detail::choose_cuts(std::move(cy), b.y0, b.y1, r);
        if (gx.size() < 3 || gy.size() < 3) return;
        xs = std::move(gx);
        ys = std::move(gy);
        side = r;
        C = static_cast<int>(xs.size()) - 1;
        R = static_cast<int>(ys.size()) - 1;
        kidEps = detail::child_eps(eps, params->eps, n(), r);

        auto make = [&](Rect box, bool closedRight, bool closedTop) {
            auto kid = std::make_unique<Node>();
            kid->params = params;
            kid->stats = stats;
            kid->region = {box, closedRight, closedTop};
            kid->depth = depth + 1;
            kid->eps = kidEps;
            kids.push_back(std::move(kid));
        };
        for (int i = 0; i < R; i++)
            for (int j = 0; j < C; j++)
                make({xs[j], xs[j + 1], ys[i], ys[i + 1]}, j == C - 1 && region.closedRight, i == R - 1 && region.closedTop);
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
        for (auto& k : kids)
            for (int s = 0; s < 5; s++) {
                k->specials[s] = query_special(k->region.box, s);
                if (k->specials[s]) {
                    k->quads[*k->specials[s]]++;
                    k->nq++;
                }
            }
        for (auto& k : kids) k->build();
    }

    std::array<Node*, 3> route(double x, double y) {
        int i = detail::locate_ext(ys, y), j = detail::locate_ext(xs, x);
        return {&cell(i, j), kids[row_index(i)].get(), kids[col_index(j)].get()};
    }

    void rebuild() {
        stats->nodeRebuilds++;
        if (depth == 0) stats->rootRebuilds++;
        build();
    }

    bool epoch_tick() {
        if (++epochCount < std::max<size_t>(1, nEpoch / divisor)) return false;
        rebuild();
        return true;
    }

    void update_point(const Point& p, bool insert) {
        if (insert) {
            if (pts[p]++ == 0) sweep.insert_point(p);
            npts++;
        } else {
            if (--pts[p] == 0) {
                pts.erase(p);
                sweep.erase_point(p);
            }
            npts--;
        }
        memo.clear();
        if (epoch_tick() || leaf()) return;
        for (Node* k : route(p.x, p.y)) {
            stats->childUpdates++;
            k->update_point(p, insert);
        }
    }

    void set_special(Node& k, int slot, const std::optional<Quadrant>& q) {
        if (k.specials[slot] == q) return;
        if (k.specials[slot]) {
            stats->childUpdates++;
            k.update_quad(*k.specials[slot], false);
        }
        k.specials[slot] = q;
        if (q) {
            stats->childUpdates++;
            k.update_quad(*q, true);
        }
    }

    void update_quad(const Quadrant& q, bool insert) {
        bool present;
        if (insert) {
            if (quads[q]++ == 0) add_indexes(q);
            nq++;
            present = true;
        } else {
            if (--quads[q] == 0) {
                quads.erase(q);
                remove_indexes(q);
            }
            nq--;
            present = quads.count(q) > 0;
        }
        memo.clear();
        if (epoch_tick() || leaf() || trivial(q)) return;
        for (Node* k : route(q.vx, q.vy)) {
            stats->childUpdates++;
            k->update_quad(q, insert);
        }
        for (auto& kp : kids) {
            Node& k = *kp;
            const Rect& b = k.region.box;
            for (int s = 0; s < 5; s++) {
                const auto& cur = k.specials[s];
                if (insert) {
                    bool fits = s < 4 ? intersects_side(q, b, kSides[s]) : contains_rect(q, b);
                    bool wins = !cur || (s < 4 ? more_extreme(q, *cur, kSides[s]) : false);
                    if (fits && wins) set_special(k, s, q);
                } else if (!present && cur && *cur == q) {
                    set_special(k, s, query_special(b, s));
                }
            }
        }
    }

    double delta() const {
        if (depth == 0 && params->deltaOverride >= 0) return params->deltaOverride;
        double nn = static_cast<double>(n());
        double gap = eps - kidEps;
        if (gap <= 0) return nn;
        double r2 = static_cast<double>(side) * side;
        return std::min(nn, params->c * (r2 + eps * r2) / gap);
    }

    const Solution& solve(const VKey& V) {
        auto it = memo.find(V);
        if (it != memo.end()) return it->second;
        return memo.emplace(V, compute(V)).first->second;
    }

    static Solution infeasible() {
        Solution s;
        s.feasible = false;
        return s;
    }

    Solution compute(const VKey& V) {
        Solution s;
        if (npts == 0) return s;
        double budget = leaf() ? kInf : params->budgetFactor * delta();
        auto res = sweep.run(budget, V);
        if (res.status != QuadrantSweep::Status::Exhausted) {
            if (depth == 0) stats->explicitRefreshes++;
            if (res.status == QuadrantSweep::Status::Infeasible) return infeasible();
            s.top = std::move(res.picks);
            s.size = s.top.size();
            for (auto& q : s.top) s.virtualUsed += in_key(V, q);
            return s;
        }
        if (depth == 0) stats->compositeRefreshes++;
        s.isExplicit = false;
        const Rect& box = region.box;

        std::optional<Quadrant> whole;
        for (auto& v : V)
            if (!whole && contains_rect(v, box)) whole = v;
        if (!whole) whole = contAll.query(box);
        if (whole) {
            s.top = {*whole};
            s.size = 1;
            s.virtualUsed = in_key(V, *whole);
            return s;
        }

        std::optional<Quadrant> m[4];
        for (int k = 0; k < 4; k++) {
            m[k] = domTriv.query(box, kSides[k]);
            for (auto& v : V)
                if (intersects_side(v, box, kSides[k]) && (!m[k] || more_extreme(v, *m[k], kSides[k]))) m[k] = v;
        }
        const auto &qL = m[0], &qR = m[1], &qT = m[2], &qB = m[3];
        int iTop = R - 1, iBot = 0, jL = 0, jR = C - 1;
        if (qT)
            while (iTop >= 0 && ys[iTop] >= qT->vy) iTop--;
        if (qB)
            while (iBot < R && ys[iBot + 1] <= qB->vy) iBot++;
        if (qL)
            while (jL < C && xs[jL + 1] <= qL->vx) jL++;
        if (qR)
            while (jR >= 0 && xs[jR] >= qR->vx) jR--;

        auto take = [&](std::initializer_list<const std::optional<Quadrant>*> qs) {
            for (auto* q : qs)
                if (*q) {
                    s.top.push_back(**q);
                    s.virtualUsed += in_key(V, **q);
                }
            s.size = s.top.size();
        };
        if (iBot > iTop) {
            take({&qT, &qB});
            return s;
        }
        if (jL > jR) {
            take({&qL, &qR});
            return s;
        }
        take({&qL, &qR, &qT, &qB});
        s.annulusKey = s.top;
        std::sort(s.annulusKey.begin(), s.annulusKey.end());

        std::vector<int> strips{row_index(iBot)};
        if (iTop != iBot) strips.push_back(row_index(iTop));
        if (iTop - iBot >= 2) {
            strips.push_back(col_index(jL));
            if (jR != jL) strips.push_back(col_index(jR));
        }
        for (int k : strips) {
            Node& kid = *kids[k];
            if (kid.npts == 0) continue;
            const Solution& sub = kid.solve(s.annulusKey);
            if (!sub.feasible) return infeasible();
            s.size += sub.size - sub.virtualUsed;
            s.annulus.push_back(k);
        }
        for (int i = iBot + 1; i < iTop; i++)
            for (int j = jL + 1; j < jR; j++) {
                Node& kid = cell(i, j);
                if (kid.npts == 0) continue;
                if (auto c = contAll.query(kid.region.box)) {
                    s.containers[*c]++;
                    s.size++;
                    continue;
                }
                const Solution& sub = kid.solve({});
                if (!sub.feasible) return infeasible();
                s.size += sub.size;
                s.cells.push_back(i * C + j);
                for (auto& q : sub.top)
                    if (kid.trivial(q)) s.viaSpecial[q]++;
            }
        return s;
    }

    int64_t multiplicity(const Quadrant& q, const VKey& V) const {
        auto it = memo.find(V);
        if (it == memo.end() || !it->second.feasible) return 0;
        const Solution& s = it->second;
        int64_t m = 0;
        if (!in_key(V, q)) m += std::count(s.top.begin(), s.top.end(), q);
        if (s.isExplicit) return m;
        if (auto c = s.containers.find(q); c != s.containers.end()) m += c->second;
        if (auto c = s.viaSpecial.find(q); c != s.viaSpecial.end()) m += c->second;
        for (int k : s.annulus)
            if (kids[k]->quads.count(q)) m += kids[k]->multiplicity(q, s.annulusKey);
        if (!trivial(q)) {
            int k = detail::locate_ext(ys, q.vy) * C + detail::locate_ext(xs, q.vx);
            if (std::binary_search(s.cells.begin(), s.cells.end(), k)) m += kids[k]->multiplicity(q, {});
        }
        return m;
    }

    void report(const VKey& V, std::vector<Range>& out) const {
        auto it = memo.find(V);
        if (it == memo.end() || !it->second.feasible) return;
        const Solution& s = it->second;
        for (auto& q : s.top)
            if (!in_key(V, q)) out.push_back(q);
        if (s.isExplicit) return;
        for (auto& [q, c] : s.containers) out.insert(out.end(), c, q);
        for (int k : s.annulus) kids[k]->report(s.annulusKey, out);
        for (int k : s.cells) kids[k]->report({}, out);
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
            mix(static_cast<double>(c));
        }
        for (auto& k : kids) k->hash_into(h);
    }
};

QuadrantCoverU::QuadrantCoverU(const Instance& inst, const ApproxParams& params) : inst_(inst), params_(params) {
    if (inst.kind != Kind::Quadrant2D || inst.weighted)
        throw Error(ErrorCode::KindMismatch, "unweighted quadrant structure needs an unweighted quadrant instance");
    if (params.eps <= 0) throw Error(ErrorCode::ConfigError, "eps must be positive");
    root_ = std::make_unique<Node>();
    root_->params = &params_;
    root_->stats = &stats_;
    root_->region = {inst.pointRange, true, true};
    root_->eps = params.eps;
    for (auto& [p, c] : inst.points) {
        root_->pts[p] += c;
        root_->npts += c;
    }
    for (auto& [r, c] : inst.ranges) {
        root_->quads[std::get<Quadrant>(r)] += c;
        root_->nq += c;
    }
    root_->build();
}

QuadrantCoverU::~QuadrantCoverU() = default;

void QuadrantCoverU::update(const UpdateOp& op) {
    if (op.action == Action::Snapshot) return;
    apply_update(inst_, op);
    switch (op.action) {
        case Action::InsertPoint: root_->update_point(op.point, true); break;
        case Action::DeletePoint: root_->update_point(op.point, false); break;
        case Action::InsertRange: root_->update_quad(std::get<Quadrant>(op.range), true); break;
        case Action::DeleteRange: root_->update_quad(std::get<Quadrant>(op.range), false); break;
        case Action::Snapshot: break;
    }
}

bool QuadrantCoverU::feasible() { return root_->solve({}).feasible; }

size_t QuadrantCoverU::size() { return root_->solve({}).size; }

int64_t QuadrantCoverU::multiplicity(const Range& r) {
    root_->solve({});
    if (!std::holds_alternative<Quadrant>(r)) return 0;
    return root_->multiplicity(std::get<Quadrant>(r), {});
}

std::vector<Range> QuadrantCoverU::report() {
    root_->solve({});
    std::vector<Range> out;
    root_->report({}, out);
    return out;
}

bool QuadrantCoverU::last_refresh_explicit() { return root_->solve({}).isExplicit; }

double QuadrantCoverU::child_eps() const { return root_->kidEps; }

int QuadrantCoverU::grid_side() const { return root_->side; }

int QuadrantCoverU::epoch_divisor() const { return root_->divisor; }

std::vector<QuadrantCoverU::ChildView> QuadrantCoverU::children() const {
    std::vector<ChildView> out;
    for (auto& k : root_->kids) {
        ChildView v;
        v.region = k->region;
        for (auto& [p, c] : k->pts) v.points.push_back(p);
        for (auto& [q, c] : k->quads) v.quadrants.push_back(q);
        for (auto& s : k->specials)
            if (s) v.specials.push_back(*s);
        out.push_back(std::move(v));
    }
    return out;
}

uint64_t QuadrantCoverU::fingerprint() const {
    uint64_t h = 1469598103934665603ull;
    root_->hash_into(h);
    return h;
}

}  // namespace dyncover
