#include "dyncover/unitsquare.hpp"

#include <algorithm>
#include <cmath>

namespace dyncover {

namespace {

void add_stats(CoverStats& to, const CoverStats& s) {
    to.rootRebuilds += s.rootRebuilds;
    to.nodeRebuilds += s.nodeRebuilds;
    to.oneSidedUpdates += s.oneSidedUpdates;
    to.oneSidedMultiRoutes += s.oneSidedMultiRoutes;
    to.compositeRefreshes += s.compositeRefreshes;
    to.explicitRefreshes += s.explicitRefreshes;
    to.childUpdates += s.childUpdates;
}

}  // namespace

UnitSquareCover::UnitSquareCover(const Instance& inst, const ApproxParams& params) : inst_(inst), params_(params) {
    if (inst.kind != Kind::UnitSquare2D) throw Error(ErrorCode::KindMismatch, "unit-square structure needs a unit-square instance");
    const Rect& pr = inst.pointRange;
    nx_ = std::max<int64_t>(1, static_cast<int64_t>(std::ceil(pr.x1 - pr.x0)));
    ny_ = std::max<int64_t>(1, static_cast<int64_t>(std::ceil(pr.y1 - pr.y0)));

    std::map<Cell, Instance> parts;
    std::map<Cell, std::map<Quadrant, std::map<UnitSquare, int64_t>>> sources;
    auto part = [&](const Cell& c) -> Instance& {
        auto it = parts.find(c);
        if (it != parts.end()) return it->second;
        Instance ci;
        ci.kind = Kind::Quadrant2D;
        ci.weighted = inst.weighted;
        ci.pointRange = cell_rect(c);
        return parts.emplace(c, ci).first->second;
    };
    for (auto& [p, cnt] : inst.points) part(cell_of(p)).points[p] += cnt;
    for (auto& [r, cnt] : inst.ranges) {
        const auto& s = std::get<UnitSquare>(r);
        for (const Cell& c : cells_of(s)) {
            Quadrant q = derived(s, c);
            part(c).ranges[q] += cnt;
            sources[c][q][s] += cnt;
        }
    }
    const char* kind = inst.weighted ? "quadrant-w" : "quadrant-u";
    for (auto& [c, ci] : parts) {
        CellState& st = cells_[c];
        st.cover = make_cover(kind, ci, params_);
        st.source = std::move(sources[c]);
    }
}

UnitSquareCover::~UnitSquareCover() = default;

UnitSquareCover::Cell UnitSquareCover::cell_of(const Point& p) const {
    const Rect& pr = inst_.pointRange;
    auto locate = [](double v, double lo, int64_t n) {
        int64_t i = std::clamp<int64_t>(static_cast<int64_t>(std::floor(v - lo)), 0, n - 1);
        while (i > 0 && v < lo + static_cast<double>(i)) i--;
        while (i < n - 1 && v >= lo + static_cast<double>(i + 1)) i++;
        return i;
    };
    return {locate(p.x, pr.x0, nx_), locate(p.y, pr.y0, ny_)};
}

Rect UnitSquareCover::cell_rect(const Cell& c) const {
    const Rect& pr = inst_.pointRange;
    double x0 = pr.x0 + static_cast<double>(c.first), y0 = pr.y0 + static_cast<double>(c.second);
    return {x0, std::min(x0 + 1, pr.x1), y0, std::min(y0 + 1, pr.y1)};
}

std::vector<UnitSquareCover::Cell> UnitSquareCover::cells_of(const UnitSquare& s) const {
    const Rect& pr = inst_.pointRange;
    // Axis cells [lo, hi) (closed on the last one) that meet [a, a + 1].
    auto axis = [](double a, double lo, double hi, int64_t n) {
        std::vector<int64_t> out;
        int64_t first = std::clamp<int64_t>(static_cast<int64_t>(std::floor(a - lo)) - 1, 0, n - 1);
        for (int64_t i = first; i < n && i <= first + 3; i++) {
            double c0 = lo + static_cast<double>(i);
            double c1 = std::min(c0 + 1, hi);
            bool last = i == n - 1;
            if ((last ? a <= c1 : a < c1) && a + 1 >= c0) out.push_back(i);
        }
        return out;
    };
    std::vector<Cell> out;
    for (int64_t i : axis(s.cx, pr.x0, pr.x1, nx_))
        for (int64_t j : axis(s.cy, pr.y0, pr.y1, ny_)) out.push_back({i, j});
    return out;
}

Quadrant UnitSquareCover::derived(const UnitSquare& s, const Cell& c) const {
    Rect r = cell_rect(c);
    bool east = s.cx >= r.x0, north = s.cy >= r.y0;
    Dir d = east ? (north ? Dir::NE : Dir::SE) : (north ? Dir::NW : Dir::SW);
    return Quadrant{d, east ? s.cx : s.cx + 1, north ? s.cy : s.cy + 1, s.w};
}

UnitSquareCover::CellState& UnitSquareCover::cell(const Cell& c) {
    auto it = cells_.find(c);
    if (it != cells_.end()) return it->second;
    Instance ci;
    ci.kind = Kind::Quadrant2D;
    ci.weighted = inst_.weighted;
    ci.pointRange = cell_rect(c);
    CellState& st = cells_[c];
    st.cover = make_cover(inst_.weighted ? "quadrant-w" : "quadrant-u", ci, params_);
    return st;
}

void UnitSquareCover::drop_if_empty(const Cell& c) {
    auto it = cells_.find(c);
    if (it == cells_.end() || it->second.cover->instance().size() != 0) return;
    add_stats(retired_, it->second.cover->stats());
    cells_.erase(it);
}

void UnitSquareCover::update(const UpdateOp& op) {
    if (op.action == Action::Snapshot) return;
    if (inst_.weighted && (op.action == Action::InsertRange || op.action == Action::DeleteRange)) {
        double w = weight_of(op.range);
        if (!(w >= 1 && w <= static_cast<double>(params_.U) && w == std::floor(w)))
            throw Error(ErrorCode::WeightOutOfRange, "weighted squares need integer weights in [1, U]");
    }
    apply_update(inst_, op);
    apply(op);
}

void UnitSquareCover::apply(const UpdateOp& op) {
    switch (op.action) {
        case Action::InsertPoint:
        case Action::DeletePoint: {
            Cell c = cell_of(op.point);
            cell(c).cover->update(op);
            drop_if_empty(c);
            break;
        }
        case Action::InsertRange:
        case Action::DeleteRange: {
            const auto& s = std::get<UnitSquare>(op.range);
            bool insert = op.action == Action::InsertRange;
            for (const Cell& c : cells_of(s)) {
                CellState& st = cell(c);
                Quadrant q = derived(s, c);
                st.cover->update(insert ? UpdateOp::insert_range(q) : UpdateOp::delete_range(q));
                auto& src = st.source[q];
                if (insert) {
                    src[s]++;
                } else {
                    if (--src[s] == 0) src.erase(s);
                    if (src.empty()) st.source.erase(q);
                }
                drop_if_empty(c);
            }
            break;
        }
        case Action::Snapshot: break;
    }
}

bool UnitSquareCover::feasible() {
    for (auto& [c, st] : cells_)
        if (!st.cover->feasible()) return false;
    return true;
}

double UnitSquareCover::cost() {
    double total = 0;
    for (auto& [c, st] : cells_) total += st.cover->cost();
    return total;
}

size_t UnitSquareCover::size() {
    if (!feasible()) return 0;
    size_t total = 0;
    for (auto& [c, st] : cells_) total += st.cover->size();
    return total;
}

std::vector<Range> UnitSquareCover::report() {
    std::vector<Range> out;
    if (!feasible()) return out;
    for (auto& [c, st] : cells_)
        for (auto& r : st.cover->report()) out.push_back(st.source.at(std::get<Quadrant>(r)).begin()->first);
    return out;
}

int64_t UnitSquareCover::multiplicity(const Range& r) {
    const auto* s = std::get_if<UnitSquare>(&r);
    if (!s || !feasible()) return 0;
    int64_t total = 0;
    for (const Cell& c : cells_of(*s)) {
        auto it = cells_.find(c);
        if (it == cells_.end()) continue;
        Quadrant q = derived(*s, c);
        auto src = it->second.source.find(q);
        // The cell solution names the quadrant; it maps back to the first source square.
        if (src == it->second.source.end() || src->second.begin()->first != *s) continue;
        total += it->second.cover->multiplicity(q);
    }
    return total;
}

const CoverStats& UnitSquareCover::stats() const {
    stats_ = retired_;
    for (auto& [c, st] : cells_) add_stats(stats_, st.cover->stats());
    return stats_;
}

}  // namespace dyncover
