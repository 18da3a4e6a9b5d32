#include "dyncover/support.hpp"

#include <algorithm>
#include <cmath>

namespace dyncover {

// ---------------------------------------------------------------- StabbingMaxMap

StabbingMaxMap::StabbingMaxMap() = default;

void StabbingMaxMap::clear() {
    nodes_.clear();
    free_.clear();
    root_ = -1;
    size_ = 0;
}

bool StabbingMaxMap::better(int i, int j) const {
    const Interval& x = nodes_[i].key;
    const Interval& y = nodes_[j].key;
    if (x.b != y.b) return x.b > y.b;
    if (x.a != y.a) return x.a < y.a;
    return x.w < y.w;
}

void StabbingMaxMap::pull(int t) {
    Node& n = nodes_[t];
    int b = t;
    if (n.left >= 0 && better(nodes_[n.left].best, b)) b = nodes_[n.left].best;
    if (n.right >= 0 && better(nodes_[n.right].best, b)) b = nodes_[n.right].best;
    n.best = b;
}

int StabbingMaxMap::rotate_right(int t) {
    int l = nodes_[t].left;
    nodes_[t].left = nodes_[l].right;
    nodes_[l].right = t;
    pull(t);
    pull(l);
    return l;
}

int StabbingMaxMap::rotate_left(int t) {
    int r = nodes_[t].right;
    nodes_[t].right = nodes_[r].left;
    nodes_[r].left = t;
    pull(t);
    pull(r);
    return r;
}

int StabbingMaxMap::insert_at(int t, const Interval& iv) {
    if (t < 0) {
        int id;
        if (!free_.empty()) {
            id = free_.back();
            free_.pop_back();
        } else {
            id = static_cast<int>(nodes_.size());
            nodes_.emplace_back();
        }
        nodes_[id] = Node{iv, 1, static_cast<uint32_t>(rng_()), -1, -1, id};
        return id;
    }
    if (iv == nodes_[t].key) {
        nodes_[t].count++;
        return t;
    }
    if (iv < nodes_[t].key) {
        int l = insert_at(nodes_[t].left, iv);
        nodes_[t].left = l;
        if (nodes_[l].prio > nodes_[t].prio) return rotate_right(t);
    } else {
        int r = insert_at(nodes_[t].right, iv);
        nodes_[t].right = r;
        if (nodes_[r].prio > nodes_[t].prio) return rotate_left(t);
    }
    pull(t);
    return t;
}

int StabbingMaxMap::erase_at(int t, const Interval& iv, bool& found) {
    if (t < 0) return t;
    Node& n = nodes_[t];
    if (iv == n.key) {
        found = true;
        if (n.count > 1) {
            n.count--;
            return t;
        }
        if (n.left < 0 || n.right < 0) {
            int child = n.left >= 0 ? n.left : n.right;
            free_.push_back(t);
            return child;
        }
        int top;
        if (nodes_[n.left].prio > nodes_[n.right].prio) {
            top = rotate_right(t);
            nodes_[top].right = erase_at(nodes_[top].right, iv, found);
        } else {
            top = rotate_left(t);
            nodes_[top].left = erase_at(nodes_[top].left, iv, found);
        }
        pull(top);
        return top;
    }
    if (iv < n.key) nodes_[t].left = erase_at(n.left, iv, found);
    else nodes_[t].right = erase_at(n.right, iv, found);
    pull(t);
    return t;
}

void StabbingMaxMap::insert(const Interval& iv) {
    root_ = insert_at(root_, iv);
    size_++;
}

void StabbingMaxMap::erase(const Interval& iv) {
    bool found = false;
    root_ = erase_at(root_, iv, found);
    if (!found) throw Error(ErrorCode::DeleteMissing, "interval not in stabbing map");
    size_--;
}

std::optional<Interval> StabbingMaxMap::query(double x) const {
    int t = root_, res = -1;
    while (t >= 0) {
        const Node& n = nodes_[t];
        if (n.key.a <= x) {
            if (res < 0 || better(t, res)) res = t;
            if (n.left >= 0 && better(nodes_[n.left].best, res)) res = nodes_[n.left].best;
            t = n.right;
        } else {
            t = n.left;
        }
    }
    if (res < 0) return std::nullopt;
    return nodes_[res].key;
}

// ---------------------------------------------------------------- RangeMinMax2D

bool RangeMinMax2D::better(const Entry& a, const Entry& b) const {
    if (a.w != b.w) return mode_ == Mode::MinWeight ? a.w < b.w : a.w > b.w;
    if (a.x != b.x) return a.x < b.x;
    if (a.y != b.y) return a.y < b.y;
    return a.handle < b.handle;
}

int RangeMinMax2D::pick(const Tree& t, int a, int b) const {
    if (a < 0) return b;
    if (b < 0) return a;
    return better(t.pts[a], t.pts[b]) ? a : b;
}

int RangeMinMax2D::build_rec(Tree& t, int lo, int hi, int depth) {
    if (lo >= hi) return -1;
    int mid = (lo + hi) / 2;
    auto first = t.pts.begin();
    if (depth % 2 == 0)
        std::nth_element(first + lo, first + mid, first + hi, [](const Entry& a, const Entry& b) { return a.x < b.x; });
    else
        std::nth_element(first + lo, first + mid, first + hi, [](const Entry& a, const Entry& b) { return a.y < b.y; });
    int l = build_rec(t, lo, mid, depth + 1);
    int r = build_rec(t, mid + 1, hi, depth + 1);
    Rect box{t.pts[mid].x, t.pts[mid].x, t.pts[mid].y, t.pts[mid].y};
    auto grow = [&](int child) {
        const Rect& c = t.box[child];
        box.x0 = std::min(box.x0, c.x0);
        box.x1 = std::max(box.x1, c.x1);
        box.y0 = std::min(box.y0, c.y0);
        box.y1 = std::max(box.y1, c.y1);
    };
    if (lo < mid) grow((lo + mid) / 2);
    if (mid + 1 < hi) grow((mid + 1 + hi) / 2);
    t.box[mid] = box;
    t.best[mid] = pick(t, pick(t, l, r), mid);
    return t.best[mid];
}

void RangeMinMax2D::build(Tree& t, std::vector<Entry> pts) {
    t.pts = std::move(pts);
    size_t n = t.pts.size();
    t.alive.assign(n, 1);
    t.box.assign(n, Rect{});
    t.best.assign(n, -1);
    t.aliveCount = n;
    build_rec(t, 0, static_cast<int>(n), 0);
}

void RangeMinMax2D::refresh_path(Tree& t, int pos) {
    int mids[128], los[128], his[128];
    int depth = 0;
    int lo = 0, hi = static_cast<int>(t.pts.size());
    while (lo < hi) {
        int mid = (lo + hi) / 2;
        mids[depth] = mid;
        los[depth] = lo;
        his[depth] = hi;
        depth++;
        if (pos == mid) break;
        if (pos < mid) hi = mid;
        else lo = mid + 1;
    }
    for (int d = depth - 1; d >= 0; d--) {
        int mid = mids[d], l0 = los[d], h0 = his[d];
        int b = t.alive[mid] ? mid : -1;
        if (l0 < mid) b = pick(t, b, t.best[(l0 + mid) / 2]);
        if (mid + 1 < h0) b = pick(t, b, t.best[(mid + 1 + h0) / 2]);
        t.best[mid] = b;
    }
}

uint64_t RangeMinMax2D::insert(double x, double y, double w, uint64_t tag) {
    Entry e{x, y, w, tag, nextHandle_++};
    std::vector<Entry> carry{e};
    size_t k = 0;
    while (k < levels_.size() && !levels_[k].pts.empty()) {
        Tree& t = levels_[k];
        for (size_t i = 0; i < t.pts.size(); i++)
            if (t.alive[i]) carry.push_back(t.pts[i]);
        dead_ -= t.pts.size() - t.aliveCount;
        t = Tree{};
        k++;
    }
    if (k == levels_.size()) levels_.emplace_back();
    build(levels_[k], std::move(carry));
    Tree& t = levels_[k];
    for (size_t i = 0; i < t.pts.size(); i++) where_[t.pts[i].handle] = {static_cast<int>(k), static_cast<int>(i)};
    alive_++;
    return e.handle;
}

void RangeMinMax2D::erase(uint64_t handle) {
    auto it = where_.find(handle);
    if (it == where_.end()) throw Error(ErrorCode::DeleteMissing, "handle not in range structure");
    auto [lvl, pos] = it->second;
    where_.erase(it);
    Tree& t = levels_[lvl];
    t.alive[pos] = 0;
    t.aliveCount--;
    refresh_path(t, pos);
    alive_--;
    dead_++;
    if (dead_ > alive_ + 32) compact();
}

void RangeMinMax2D::compact() {
    std::vector<Entry> all;
    for (auto& t : levels_)
        for (size_t i = 0; i < t.pts.size(); i++)
            if (t.alive[i]) all.push_back(t.pts[i]);
    levels_.clear();
    dead_ = 0;
    if (all.empty()) return;
    size_t k = 0;
    while ((size_t{1} << k) < all.size()) k++;
    levels_.resize(k + 1);
    build(levels_[k], std::move(all));
    Tree& t = levels_[k];
    for (size_t i = 0; i < t.pts.size(); i++) where_[t.pts[i].handle] = {static_cast<int>(k), static_cast<int>(i)};
}

void RangeMinMax2D::clear() {
    levels_.clear();
    where_.clear();
    alive_ = dead_ = 0;
}

void RangeMinMax2D::query_rec(const Tree& t, int lo, int hi, const Rect& r, const Entry*& best) const {
    if (lo >= hi) return;
    int mid = (lo + hi) / 2;
    int b = t.best[mid];
    if (b < 0) return;
    const Rect& box = t.box[mid];
    if (box.x1 < r.x0 || box.x0 > r.x1 || box.y1 < r.y0 || box.y0 > r.y1) return;
    if (best && !better(t.pts[b], *best)) return;
    if (r.x0 <= box.x0 && box.x1 <= r.x1 && r.y0 <= box.y0 && box.y1 <= r.y1) {
        best = &t.pts[b];
        return;
    }
    if (t.alive[mid] && r.contains(t.pts[mid].x, t.pts[mid].y) && (!best || better(t.pts[mid], *best)))
        best = &t.pts[mid];
    query_rec(t, lo, mid, r, best);
    query_rec(t, mid + 1, hi, r, best);
}

std::optional<RangeMinMax2D::Entry> RangeMinMax2D::query(const Rect& r) const {
    const Entry* best = nullptr;
    if (r.empty()) return std::nullopt;
    for (auto& t : levels_) query_rec(t, 0, static_cast<int>(t.pts.size()), r, best);
    if (!best) return std::nullopt;
    return *best;
}

// ---------------------------------------------------------------- containment

void IntervalContainmentIndex::insert(const Interval& iv) {
    handles_.insert({iv, rm_.insert(iv.a, iv.b, iv.w)});
}

void IntervalContainmentIndex::erase(const Interval& iv) {
    auto it = handles_.find(iv);
    if (it == handles_.end()) throw Error(ErrorCode::DeleteMissing, "interval not in containment index");
    rm_.erase(it->second);
    handles_.erase(it);
}

std::optional<Interval> IntervalContainmentIndex::query(double lo, double hi) const {
    auto e = rm_.query(Rect{-kInf, lo, hi, kInf});
    if (!e) return std::nullopt;
    return Interval{e->x, e->y, e->w};
}

namespace {

// Region of vertices whose quadrant of direction d contains rectangle r.
Rect container_region(Dir d, const Rect& r) {
    Rect q{-kInf, kInf, -kInf, kInf};
    if (faces_east(d)) q.x1 = r.x0;
    else q.x0 = r.x1;
    if (faces_north(d)) q.y1 = r.y0;
    else q.y0 = r.y1;
    return q;
}

}  // namespace

void QuadrantContainmentIndex::insert(const Quadrant& q) {
    handles_.insert({q, rm_[static_cast<int>(q.dir)].insert(q.vx, q.vy, q.w)});
    count_++;
}

void QuadrantContainmentIndex::erase(const Quadrant& q) {
    auto it = handles_.find(q);
    if (it == handles_.end()) throw Error(ErrorCode::DeleteMissing, "quadrant not in containment index");
    rm_[static_cast<int>(q.dir)].erase(it->second);
    handles_.erase(it);
    count_--;
}

std::optional<Quadrant> QuadrantContainmentIndex::query(const Rect& r) const {
    std::optional<Quadrant> best;
    for (int d = 0; d < 4; d++) {
        auto e = rm_[d].query(container_region(static_cast<Dir>(d), r));
        if (!e) continue;
        Quadrant q{static_cast<Dir>(d), e->x, e->y, e->w};
        if (!best || q.w < best->w || (q.w == best->w && q < *best)) best = q;
    }
    return best;
}

// ---------------------------------------------------------------- dominance

bool intersects_side(const Quadrant& q, const Rect& r, Side side) {
    if (contains_rect(q, r)) return false;
    switch (side) {
        case Side::Left: return q.contains(r.x0, r.y0) && q.contains(r.x0, r.y1);
        case Side::Right: return q.contains(r.x1, r.y0) && q.contains(r.x1, r.y1);
        case Side::Top: return q.contains(r.x0, r.y1) && q.contains(r.x1, r.y1);
        case Side::Bottom: return q.contains(r.x0, r.y0) && q.contains(r.x1, r.y0);
    }
    return false;
}

namespace {

// Larger is more extreme for the given side.
double extremeness(const Quadrant& q, Side side) {
    switch (side) {
        case Side::Left: return q.vx;
        case Side::Right: return -q.vx;
        case Side::Top: return -q.vy;
        case Side::Bottom: return q.vy;
    }
    return 0;
}

}  // namespace

std::optional<Quadrant> dominance_scan(const std::vector<Quadrant>& qs, const Rect& r, Side side) {
    std::optional<Quadrant> best;
    for (auto& q : qs) {
        if (!intersects_side(q, r, side)) continue;
        if (!best) {
            best = q;
            continue;
        }
        double e = extremeness(q, side), eb = extremeness(*best, side);
        if (e > eb || (e == eb && q < *best)) best = q;
    }
    return best;
}

void QuadrantDominanceIndex::insert(const Quadrant& q) {
    uint64_t tag = nextTag_++;
    int d = static_cast<int>(q.dir);
    uint64_t hx = rm_[d][0].insert(q.vx, q.vy, q.vx, tag);
    uint64_t hy = rm_[d][1].insert(q.vx, q.vy, q.vy, tag);
    handles_.insert({q, {hx, hy, tag}});
    byTag_[tag] = q;
    count_++;
}

void QuadrantDominanceIndex::erase(const Quadrant& q) {
    auto it = handles_.find(q);
    if (it == handles_.end()) throw Error(ErrorCode::DeleteMissing, "quadrant not in dominance index");
    int d = static_cast<int>(q.dir);
    auto [hx, hy, tag] = it->second;
    rm_[d][0].erase(hx);
    rm_[d][1].erase(hy);
    byTag_.erase(tag);
    handles_.erase(it);
    count_--;
}

std::optional<Quadrant> QuadrantDominanceIndex::query(const Rect& r, Side side) const {
    // For each side, the two directions that can partially intersect it and the
    // vertex region that realizes "contains the side but not the rectangle".
    struct Probe {
        Dir dir;
        int key;
        Rect region;
    };
    double bx1 = std::nextafter(r.x1, -kInf), ax0 = std::nextafter(r.x0, kInf);
    double by1 = std::nextafter(r.y1, -kInf), ay0 = std::nextafter(r.y0, kInf);
    Probe probes[2];
    switch (side) {
        case Side::Left:
            probes[0] = {Dir::NW, 0, {r.x0, bx1, -kInf, r.y0}};
            probes[1] = {Dir::SW, 0, {r.x0, bx1, r.y1, kInf}};
            break;
        case Side::Right:
            probes[0] = {Dir::NE, 0, {ax0, r.x1, -kInf, r.y0}};
            probes[1] = {Dir::SE, 0, {ax0, r.x1, r.y1, kInf}};
            break;
        case Side::Top:
            probes[0] = {Dir::NE, 1, {-kInf, r.x0, ay0, r.y1}};
            probes[1] = {Dir::NW, 1, {r.x1, kInf, ay0, r.y1}};
            break;
        case Side::Bottom:
            probes[0] = {Dir::SE, 1, {-kInf, r.x0, r.y0, by1}};
            probes[1] = {Dir::SW, 1, {r.x1, kInf, r.y0, by1}};
            break;
    }
    std::optional<Quadrant> best;
    for (auto& p : probes) {
        auto e = rm_[static_cast<int>(p.dir)][p.key].query(p.region);
        if (!e) continue;
        const Quadrant& q = byTag_.at(e->tag);
        if (!best) {
            best = q;
            continue;
        }
        double ex = extremeness(q, side), eb = extremeness(*best, side);
        if (ex > eb || (ex == eb && q < *best)) best = q;
    }
    return best;
}

// ---------------------------------------------------------------- GridLocator

GridLocator::GridLocator(std::vector<double> xs, std::vector<double> ys) : xs_(std::move(xs)), ys_(std::move(ys)) {}

int GridLocator::locate(const std::vector<double>& cuts, double v) {
    if (cuts.size() < 2 || v < cuts.front() || v > cuts.back() || std::isnan(v))
        throw Error(ErrorCode::OutOfRange, "coordinate outside grid");
    int idx = static_cast<int>(std::upper_bound(cuts.begin(), cuts.end(), v) - cuts.begin()) - 1;
    int last = static_cast<int>(cuts.size()) - 2;
    return std::min(idx, last);
}

}  // namespace dyncover
