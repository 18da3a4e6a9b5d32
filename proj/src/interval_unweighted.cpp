#include "dyncover/interval_unweighted.hpp"

#include <algorithm>
#include <cmath>

#include "portions.hpp"

namespace dyncover {

using detail::choose_cuts;
using detail::route_interval;

struct IntervalCoverU::Node {
    const ApproxParams* params = nullptr;
    CoverStats* stats = nullptr;
    double lo = 0, hi = 1;
    int depth = 0;
    double eps = 0.5;

    std::map<double, int64_t> pts;
    std::map<Interval, int64_t> ivs;
    size_t npts = 0, nivs = 0;
    StabbingMaxMap stab;
    IntervalContainmentIndex contain;

    std::vector<double> cuts;  // empty at a leaf
    std::vector<std::unique_ptr<Node>> kids;
    double kidEps = 0;
    size_t nEpoch = 0;
    size_t epochCount = 0;

    // Solution state, valid when !dirty.
    bool dirty = true;
    bool feasible = true;
    bool isExplicit = true;
    size_t solSize = 0;
    std::map<Interval, int64_t> held;  // explicit solution, or the containers of a composite one
    std::vector<char> useKid;

    size_t n() const { return npts + nivs; }
    bool leaf() const { return cuts.empty(); }

    void build() {
        kids.clear();
        cuts.clear();
        stab.clear();
        contain = IntervalContainmentIndex();
        for (auto& [iv, c] : ivs)
            for (int64_t t = 0; t < c; t++) {
                stab.insert(iv);
                contain.insert(iv);
            }
        nEpoch = n();
        epochCount = 0;
        dirty = true;
        if (n() < params->baseThreshold || depth >= params->maxDepth) return;

        std::vector<double> coords;
        coords.reserve(npts + 2 * nivs);
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

    void update_point(double x, bool insert) {
        if (insert) {
            pts[x]++;
            npts++;
        } else {
            if (--pts[x] == 0) pts.erase(x);
            npts--;
        }
        dirty = true;
        if (++epochCount >= std::max<size_t>(1, nEpoch / params->r)) return rebuild();
        if (!leaf()) kids[GridLocator::locate(cuts, x)]->update_point(x, insert);
    }

    void update_interval(const Interval& iv, bool insert) {
        if (insert) {
            ivs[iv]++;
            nivs++;
            stab.insert(iv);
            contain.insert(iv);
        } else {
            if (--ivs[iv] == 0) ivs.erase(iv);
            nivs--;
            stab.erase(iv);
            contain.erase(iv);
        }
        dirty = true;
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

    enum class Greedy { Done, Infeasible, Exhausted };

    // Left-to-right greedy; each pick costs ceil(log2(n + 2)) steps.
    Greedy greedy(double budget) {
        held.clear();
        solSize = 0;
        double stepCost = std::ceil(std::log2(static_cast<double>(n()) + 2));
        double spent = 0;
        auto it = pts.begin();
        while (it != pts.end()) {
            if (spent + stepCost > budget) return Greedy::Exhausted;
            spent += stepCost;
            auto q = stab.query(it->first);
            if (!q || q->b < it->first) return Greedy::Infeasible;
            held[*q]++;
            solSize++;
            it = pts.upper_bound(q->b);
        }
        return Greedy::Done;
    }

    double delta() const {
        if (depth == 0 && params->deltaOverride >= 0) return params->deltaOverride;
        double nn = static_cast<double>(n());
        double gap = eps - kidEps;
        if (gap <= 0) return nn;
        return std::min(nn, params->c * (params->r + eps * params->r) / gap);
    }

    void refresh() {
        if (!dirty) return;
        dirty = false;
        useKid.assign(kids.size(), 0);
        double budget = leaf() ? kInf : params->budgetFactor * delta() * std::ceil(std::log2(static_cast<double>(n()) + 2));
        Greedy g = greedy(budget);
        if (g != Greedy::Exhausted) {
            isExplicit = true;
            feasible = g == Greedy::Done;
            if (!feasible) held.clear(), solSize = 0;
            if (depth == 0) stats->explicitRefreshes++;
            return;
        }
        if (depth == 0) stats->compositeRefreshes++;
        isExplicit = false;
        feasible = true;
        held.clear();
        solSize = 0;
        for (size_t i = 0; i < kids.size(); i++) {
            Node& kid = *kids[i];
            if (kid.npts == 0) continue;
            if (auto c = contain.query(cuts[i], cuts[i + 1])) {
                held[*c]++;
                solSize++;
                continue;
            }
            kid.refresh();
            if (!kid.feasible) {
                feasible = false;
                break;
            }
            useKid[i] = 1;
            solSize += kid.solSize;
        }
        if (!feasible) {
            held.clear();
            solSize = 0;
            useKid.assign(kids.size(), 0);
        }
    }

    int64_t multiplicity(const Interval& iv) const {
        if (!feasible) return 0;
        auto it = held.find(iv);
        int64_t m = it == held.end() ? 0 : it->second;
        if (isExplicit) return m;
        int route[2];
        int cnt = route_interval(iv, cuts, route);
        for (int j = 0; j < cnt; j++)
            if (useKid[route[j]]) m += kids[route[j]]->multiplicity(iv);
        return m;
    }

    void report(std::vector<Range>& out) const {
        if (!feasible) return;
        for (auto& [iv, c] : held) out.insert(out.end(), c, iv);
        for (size_t i = 0; i < useKid.size(); i++)
            if (useKid[i]) kids[i]->report(out);
    }
};

IntervalCoverU::IntervalCoverU(const Instance& inst, const ApproxParams& params) : inst_(inst), params_(params) {
    if (inst.kind != Kind::Interval1D || inst.weighted)
        throw Error(ErrorCode::KindMismatch, "unweighted interval structure needs an unweighted interval instance");
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

IntervalCoverU::~IntervalCoverU() = default;

void IntervalCoverU::update(const UpdateOp& op) {
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

bool IntervalCoverU::feasible() {
    root_->refresh();
    return root_->feasible;
}

size_t IntervalCoverU::size() {
    root_->refresh();
    return root_->solSize;
}

int64_t IntervalCoverU::multiplicity(const Range& r) {
    root_->refresh();
    if (!std::holds_alternative<Interval>(r)) return 0;
    return root_->multiplicity(std::get<Interval>(r));
}

std::vector<Range> IntervalCoverU::report() {
    root_->refresh();
    std::vector<Range> out;
    root_->report(out);
    return out;
}

bool IntervalCoverU::last_refresh_explicit() {
    root_->refresh();
    return root_->isExplicit;
}

double IntervalCoverU::child_eps() const { return root_->kidEps; }

int IntervalCoverU::portions() const { return root_->leaf() ? 0 : static_cast<int>(root_->kids.size()); }

}  // namespace dyncover
