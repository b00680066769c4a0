#include "qpt/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace qpt {

void LatticeParams::validate() const {
    if (n_sites < 1) throw std::invalid_argument("LatticeParams: n_sites must be >= 1");
    if (!(kappa > 0.0)) throw std::invalid_argument("LatticeParams: kappa must be > 0");
    if (!(beta > 0.0)) throw std::invalid_argument("LatticeParams: beta must be > 0");
    if (!(omega_f > 2.0 * kappa))
        throw std::invalid_argument(
            "LatticeParams: omega_f must exceed 2*kappa so all mode frequencies are positive");
    if (!(g >= 0.0)) throw std::invalid_argument("LatticeParams: g must be >= 0");
}

std::vector<NormalMode> normal_modes(const LatticeParams& params) {
    params.validate();
    const double omega_a = params.omega_a();
    std::vector<NormalMode> modes;
    modes.reserve(params.n_sites);
    for (int m = 1; m <= params.n_sites; ++m) {
        NormalMode mode;
        mode.m = m;
        mode.k = 2.0 * std::numbers::pi * m / (params.n_sites + 1);
        mode.omega_k = params.omega_f + 2.0 * params.kappa * std::cos(mode.k / 2.0);
        mode.delta_k = omega_a - mode.omega_k;
        modes.push_back(mode);
    }
    return modes;
}

DressedLevel dressed_level(const LatticeParams& params, const NormalMode& mode,
                           int n) {
    if (n < 1)
        throw std::invalid_argument(
            "dressed_level: n must be >= 1 (the n=0 level is E_0^- = 0)");
    DressedLevel lvl;
    lvl.n = n;
    lvl.mode = mode;
    const double delta = mode.delta_k;
    lvl.Omega_n = std::sqrt(delta * delta + 4.0 * params.g * params.g * n);
    if (lvl.Omega_n > 0.0) {
        lvl.a_n = std::sqrt((lvl.Omega_n + delta) / (2.0 * lvl.Omega_n));
        lvl.b_n = std::sqrt((lvl.Omega_n - delta) / (2.0 * lvl.Omega_n));
    } else {
        // Fully degenerate point g = 0, delta_k = 0: any orthonormal pair
        // diagonalizes the block; use the g -> 0+ limit at zero detuning.
        lvl.a_n = lvl.b_n = std::numbers::sqrt2 / 2.0;
    }
    lvl.E_plus = n * mode.omega_k + 0.5 * delta + 0.5 * lvl.Omega_n;
    lvl.E_minus = n * mode.omega_k + 0.5 * delta - 0.5 * lvl.Omega_n;
    return lvl;
}

std::string LevelBranch::label() const {
    if (occ.empty()) return "vacuum";
    std::ostringstream os;
    for (std::size_t i = 0; i < occ.size(); ++i) {
        if (i) os << '+';
        os << "E" << occ[i].second << "-(m=" << occ[i].first << ")";
    }
    return os.str();
}

double LevelBranch::energy(const LatticeParams& params) const {
    const auto modes = normal_modes(params);
    double e = 0.0;
    for (const auto& [m, n] : occ)
        e += dressed_level(params, modes[m - 1], n).E_minus;
    return e;
}

double LevelBranch::energy_derivative_g(const LatticeParams& params) const {
    // d E_n^- / dg = -2 g n / Omega_n per occupied level.
    const auto modes = normal_modes(params);
    double d = 0.0;
    for (const auto& [m, n] : occ) {
        const auto lvl = dressed_level(params, modes[m - 1], n);
        if (lvl.Omega_n > 0.0) d += -2.0 * params.g * n / lvl.Omega_n;
    }
    return d;
}

std::vector<LevelBranch> candidate_branches(const LatticeParams& params) {
    params.validate();
    const int n_sites = params.n_sites;
    std::vector<LevelBranch> branches;
    branches.push_back({});  // vacuum
    for (int m = 1; m <= n_sites; ++m) branches.push_back({{{m, 1}}});
    for (int m = 1; m <= n_sites; ++m) branches.push_back({{{m, 2}}});
    for (int i = 1; i <= n_sites; ++i)
        for (int j = i + 1; j <= n_sites; ++j)
            branches.push_back({{{i, 1}, {j, 1}}});
    return branches;
}

std::vector<CriticalPoint> critical_couplings(const LatticeParams& params,
                                              double g_lo, double g_hi) {
    const auto modes = normal_modes(params);
    const double omega_a = params.omega_a();
    std::vector<CriticalPoint> points;
    for (const auto& mode : modes) {
        const double prod = mode.omega_k * omega_a;
        if (prod <= 0.0) continue;  // E_1^- never reaches zero for this mode
        const double g_c = std::sqrt(prod);
        if (g_c >= g_lo && g_c <= g_hi) points.push_back({mode.m, g_c});
    }
    std::sort(points.begin(), points.end(),
              [](const CriticalPoint& a, const CriticalPoint& b) { return a.g_c < b.g_c; });
    return points;
}

namespace {

// Energy of every candidate branch at coupling g, cheapest form for scanning.
struct BranchScanner {
    std::vector<NormalMode> modes;
    std::vector<LevelBranch> branches;
    LatticeParams params;

    explicit BranchScanner(const LatticeParams& p)
        : modes(normal_modes(p)), branches(candidate_branches(p)), params(p) {}

    double energy(std::size_t branch, double g) const {
        LatticeParams p = params;
        p.g = g;
        double e = 0.0;
        for (const auto& [m, n] : branches[branch].occ)
            e += dressed_level(p, modes[m - 1], n).E_minus;
        return e;
    }

    std::size_t argmin(double g) const {
        std::size_t best = 0;
        double best_e = energy(0, g);
        for (std::size_t b = 1; b < branches.size(); ++b) {
            const double e = energy(b, g);
            if (e < best_e) {
                best_e = e;
                best = b;
            }
        }
        return best;
    }
};

// Mode index reported for a crossing: the smallest mode entering the new
// branch, falling back to the smallest mode leaving the old one.
int crossing_mode(const LevelBranch& from, const LevelBranch& to) {
    auto diff = [](const LevelBranch& a, const LevelBranch& b) {
        int best = 0;
        for (const auto& occ : a.occ) {
            if (std::find(b.occ.begin(), b.occ.end(), occ) == b.occ.end())
                if (best == 0 || occ.first < best) best = occ.first;
        }
        return best;
    };
    const int entering = diff(to, from);
    if (entering) return entering;
    return diff(from, to);
}

}  // namespace

std::vector<CriticalPoint> detect_crossings(const LatticeParams& params,
                                            double g_lo, double g_hi,
                                            double tolerance) {
    if (!(g_hi > g_lo)) throw std::invalid_argument("detect_crossings: empty window");
    if (!(tolerance > 0.0)) throw std::invalid_argument("detect_crossings: tolerance must be > 0");
    BranchScanner scan(params);

    const int n_scan =
        std::clamp(static_cast<int>(std::ceil((g_hi - g_lo) / 2e-3)), 32, 20000);
    const double step = (g_hi - g_lo) / n_scan;

    std::vector<CriticalPoint> points;
    std::size_t prev = scan.argmin(g_lo);
    double g_l = g_lo;
    for (int i = 1; i <= n_scan; ++i) {
        const double g_r = (i == n_scan) ? g_hi : g_lo + i * step;
        const std::size_t cur = scan.argmin(g_r);
        if (cur == prev) {
            g_l = g_r;
            continue;
        }

        // Bisect the sign change of E_prev - E_cur inside [g_l, g_r].  Use
        // the sampled endpoints verbatim (recomputing g_r - step can round
        // past a crossing that lies exactly on a sample), and accept a zero
        // at either end: argmin breaks exact ties toward the lower branch
        // index, so the sampled energies may tie at the crossing itself.
        double lo = g_l, hi = g_r;
        const double f_lo = scan.energy(prev, lo) - scan.energy(cur, lo);
        const double f_hi = scan.energy(prev, hi) - scan.energy(cur, hi);
        if (f_lo <= 0.0 && f_hi >= 0.0 && (f_lo < 0.0 || f_hi > 0.0)) {
            while (hi - lo > tolerance) {
                const double mid = 0.5 * (lo + hi);
                const double f_mid = scan.energy(prev, mid) - scan.energy(cur, mid);
                if (f_mid < 0.0)
                    lo = mid;
                else
                    hi = mid;
            }
            points.push_back({crossing_mode(scan.branches[prev], scan.branches[cur]),
                              0.5 * (lo + hi)});
        }
        prev = cur;
        g_l = g_r;
    }

    std::sort(points.begin(), points.end(),
              [](const CriticalPoint& a, const CriticalPoint& b) { return a.g_c < b.g_c; });
    // Merge duplicates from multi-branch swaps within the same scan cell.
    std::vector<CriticalPoint> merged;
    for (const auto& p : points) {
        if (!merged.empty() && std::abs(p.g_c - merged.back().g_c) < std::max(10.0 * tolerance, 1e-9))
            continue;
        merged.push_back(p);
    }
    return merged;
}

}  // namespace qpt
