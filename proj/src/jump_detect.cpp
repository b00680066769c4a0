#include "qpt/jump_detect.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qpt {

std::vector<Jump> detect_jump(const std::vector<double>& xs,
                              const std::vector<double>& ys) {
    if (xs.size() != ys.size())
        throw std::invalid_argument("detect_jump: size mismatch");
    if (xs.size() < 3)
        throw std::invalid_argument("detect_jump: need at least 3 points");
    if (!std::is_sorted(xs.begin(), xs.end()))
        throw std::invalid_argument("detect_jump: x values must be sorted");

    const int n = static_cast<int>(xs.size()) - 1;  // intervals
    std::vector<double> d(n);
    for (int i = 0; i < n; ++i) d[i] = std::abs(ys[i + 1] - ys[i]);

    std::vector<double> sorted = d;
    std::sort(sorted.begin(), sorted.end());
    const double median = n % 2 == 1
                              ? sorted[n / 2]
                              : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    const double floor = kJumpFloorFactor * median;

    std::vector<Jump> jumps;
    for (int i = 0; i < n; ++i) {
        if (!(d[i] > 0.0) || !(d[i] > floor)) continue;

        const int lo = std::max(0, i - kJumpWindow);
        const int hi = std::min(n - 1, i + kJumpWindow);
        double mean = 0.0;
        int count = 0;
        for (int j = lo; j <= hi; ++j) {
            if (j == i) continue;
            mean += d[j];
            ++count;
        }
        if (count == 0) continue;
        mean /= count;
        double var = 0.0;
        for (int j = lo; j <= hi; ++j) {
            if (j == i) continue;
            var += (d[j] - mean) * (d[j] - mean);
        }
        var /= count;

        if (d[i] > mean + kJumpSigmaFactor * std::sqrt(var))
            jumps.push_back({0.5 * (xs[i] + xs[i + 1]), d[i]});
    }
    return jumps;
}

std::vector<Jump> detect_jump(const std::vector<std::pair<double, double>>& curve) {
    std::vector<double> xs, ys;
    xs.reserve(curve.size());
    ys.reserve(curve.size());
    for (const auto& [x, y] : curve) {
        xs.push_back(x);
        ys.push_back(y);
    }
    return detect_jump(xs, ys);
}

}  // namespace qpt
