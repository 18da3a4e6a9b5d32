#include "portions.hpp"

#include <algorithm>
#include <cmath>

namespace dyncover::detail {

std::vector<double> choose_cuts(std::vector<double> coords, double lo, double hi, int r) {
    std::vector<double> cuts{lo};
    if (!(lo < hi) || r < 2) {
        cuts.push_back(hi);
        return cuts;
    }
    std::sort(coords.begin(), coords.end());
    size_t m = coords.size();
    size_t stride = (m + r - 1) / r;
    for (int k = 1; k < r && stride > 0; k++) {
        size_t idx = k * stride;
        if (idx >= m) break;
        double v = coords[idx];
        if (v > cuts.back() && v < hi) cuts.push_back(v);
    }
    cuts.push_back(hi);
    return cuts;
}

int locate_ext(const std::vector<double>& cuts, double v) {
    int k = static_cast<int>(cuts.size()) - 1;
    if (v < cuts.front()) return -1;
    if (v > cuts.back()) return k;
    if (v == cuts.back()) return k - 1;
    return static_cast<int>(std::upper_bound(cuts.begin(), cuts.end(), v) - cuts.begin()) - 1;
}

bool meets_portion(const Interval& iv, const std::vector<double>& cuts, int i) {
    int k = static_cast<int>(cuts.size()) - 1;
    double x0 = cuts[i], x1 = cuts[i + 1];
    bool meets = (i == k - 1 ? iv.a <= x1 : iv.a < x1) && iv.b >= x0;
    return meets && !(iv.a <= x0 && iv.b >= x1);
}

int route_interval(const Interval& iv, const std::vector<double>& cuts, int out[2]) {
    int k = static_cast<int>(cuts.size()) - 1;
    int cnt = 0;
    for (int p : {locate_ext(cuts, iv.a), locate_ext(cuts, iv.b)}) {
        if (p < 0 || p >= k || (cnt && out[0] == p)) continue;
        if (meets_portion(iv, cuts, p)) out[cnt++] = p;
    }
    return cnt;
}

double child_eps(double eps, double rootEps, size_t n, int r) {
    double levels = std::log(static_cast<double>(std::max<size_t>(n, 2))) / std::log(static_cast<double>(r));
    double alpha = levels > 1 ? 1 - 1 / levels : 0;
    return std::min(eps, std::max(alpha * eps, rootEps / 2));
}

}  // namespace dyncover::detail
