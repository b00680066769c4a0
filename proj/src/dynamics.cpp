#include "qpt/dynamics.hpp"

#include "qpt/metrics.hpp"
#include "qpt/thermal.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace qpt {

double max_block_gap(const LatticeParams& params) {
    params.validate();
    const std::vector<NormalMode> modes = normal_modes(params);
    const int n = params.n_sites;
    std::vector<double> omega1(n);
    double gap = 0.0;
    for (int i = 0; i < n; ++i) {
        omega1[i] = dressed_level(params, modes[i], 1).Omega_n;
        gap = std::max(gap, dressed_level(params, modes[i], 2).Omega_n);
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) gap = std::max(gap, omega1[i] + omega1[j]);
    return gap;
}

TimeGrid make_time_grid(const LatticeParams& params, double t_max) {
    if (!(t_max > 0.0))
        throw std::invalid_argument("make_time_grid: t_max must be positive");
    const double gap = max_block_gap(params);
    TimeGrid grid;
    grid.t_max = t_max;
    grid.dt = gap > 1e-12 ? 0.05 / gap : t_max / 200.0;
    if (grid.dt > t_max) grid.dt = t_max;
    grid.count = static_cast<int>(std::floor(t_max / grid.dt)) + 1;
    return grid;
}

DensityMatrix evolve(const DensityMatrix& rho0, const LatticeParams& params,
                     double t) {
    if (!rho0.space || rho0.space->n_sites() != params.n_sites)
        throw std::invalid_argument("evolve: state space does not match params");
    const std::vector<Eigen::MatrixXd> hs = block_hamiltonians(params, *rho0.space);

    DensityMatrix out = rho0;
    const std::complex<double> mi(0.0, -1.0);
    for (std::size_t b = 0; b < hs.size(); ++b) {
        const EigenDecomposition es = sym_eig(hs[b]);
        const int n = static_cast<int>(es.values.size());
        Eigen::VectorXcd phases(n);
        for (int i = 0; i < n; ++i) phases[i] = std::exp(mi * es.values[i] * t);
        const Eigen::MatrixXcd u = es.vectors.cast<std::complex<double>>() *
                                   phases.asDiagonal() *
                                   es.vectors.transpose().cast<std::complex<double>>();
        out.blocks[b] = u * rho0.blocks[b] * u.adjoint();
    }
    return out;
}

namespace {

// Population propagator of a one-excitation block: diag(ρ(t)) = P(t) diag(ρ0)
// with P = [[1−qs, qs], [qs, 1−qs]], q = 4a²b², s = sin²(Ωt/2).
struct BlockMix {
    double q = 0.0;
    double omega = 0.0;
};

inline void mix2(double q_s, double& p0, double& p1) {
    const double flow = q_s * (p0 - p1);
    p0 -= flow;
    p1 += flow;
}

}  // namespace

TrajectoryResult max_trace_distance_trajectory(const LatticeParams& params,
                                               const TimeGrid& grid) {
    if (grid.count < 1 || !(grid.dt > 0.0))
        throw std::invalid_argument("max_trace_distance_trajectory: invalid grid");
    params.validate();

    auto space = StateSpace::build(params.n_sites);
    const DensityMatrix rho0 = factorized_state(params, space);
    const Eigen::VectorXd pop0 = rho0.diagonal_populations();

    const int n = params.n_sites;
    const std::vector<NormalMode> modes = normal_modes(params);
    std::vector<BlockMix> mix1(n), mix2_(n);
    for (int i = 0; i < n; ++i) {
        const DressedLevel l1 = dressed_level(params, modes[i], 1);
        const DressedLevel l2 = dressed_level(params, modes[i], 2);
        mix1[i] = {4.0 * l1.a_n * l1.a_n * l1.b_n * l1.b_n, l1.Omega_n};
        mix2_[i] = {4.0 * l2.a_n * l2.a_n * l2.b_n * l2.b_n, l2.Omega_n};
    }

    const auto& states = space->states();
    const auto& blocks = space->blocks();
    const int n_atom = static_cast<int>(space->atom_configs().size());

    std::vector<double> pa0(n_atom, 0.0);
    for (int s = 0; s < space->dimension(); ++s) pa0[states[s].atom_config] += pop0[s];

    TrajectoryResult result;
    result.times.reserve(grid.count);
    result.distances.reserve(grid.count);

    std::vector<double> s1(n), s2(n), pa(n_atom);
    double p4[4];
    for (int step = 0; step < grid.count; ++step) {
        const double t = grid.time(step);
        for (int i = 0; i < n; ++i) {
            const double h1 = std::sin(0.5 * mix1[i].omega * t);
            const double h2 = std::sin(0.5 * mix2_[i].omega * t);
            s1[i] = h1 * h1;
            s2[i] = h2 * h2;
        }

        std::fill(pa.begin(), pa.end(), 0.0);
        for (const Block& blk : blocks) {
            switch (blk.sector) {
                case Sector::I:
                    pa[states[blk.first].atom_config] += pop0[blk.first];
                    break;
                case Sector::II: {
                    double pf = pop0[blk.first], pe = pop0[blk.first + 1];
                    mix2(mix1[blk.mode_i - 1].q * s1[blk.mode_i - 1], pf, pe);
                    pa[states[blk.first].atom_config] += pf;
                    pa[states[blk.first + 1].atom_config] += pe;
                    break;
                }
                case Sector::III: {
                    double pf = pop0[blk.first], pe = pop0[blk.first + 1];
                    mix2(mix2_[blk.mode_i - 1].q * s2[blk.mode_i - 1], pf, pe);
                    pa[states[blk.first].atom_config] += pf;
                    pa[states[blk.first + 1].atom_config] += pe;
                    break;
                }
                case Sector::IV: {
                    const double qi = mix1[blk.mode_i - 1].q * s1[blk.mode_i - 1];
                    const double qj = mix1[blk.mode_j - 1].q * s1[blk.mode_j - 1];
                    // P4 = P2(i) ⊗ P2(j) applied to the four populations.
                    const double pi0[2] = {1.0 - qi, qi};
                    const double pj0[2] = {1.0 - qj, qj};
                    for (int r = 0; r < 4; ++r) {
                        const int ri = r >> 1, rj = r & 1;
                        double acc = 0.0;
                        for (int c = 0; c < 4; ++c) {
                            const int ci = c >> 1, cj = c & 1;
                            acc += pi0[ri ^ ci] * pj0[rj ^ cj] * pop0[blk.first + c];
                        }
                        p4[r] = acc;
                    }
                    for (int r = 0; r < 4; ++r)
                        pa[states[blk.first + r].atom_config] += p4[r];
                    break;
                }
            }
        }

        double d = 0.0;
        for (int c = 0; c < n_atom; ++c) d += std::abs(pa[c] - pa0[c]);
        d *= 0.5;

        result.times.push_back(t);
        result.distances.push_back(d);
        if (d > result.max_distance) {
            result.max_distance = d;
            result.argmax_time = t;
        }
    }
    return result;
}

}  // namespace qpt
