#include "qpt/observables.hpp"

#include "qpt/thermal.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace qpt {

ExcitationOperator excitation_operator(const StateSpace& space) {
    ExcitationOperator op;
    op.diag.resize(space.dimension());
    for (int s = 0; s < space.dimension(); ++s)
        op.diag[s] = space.states()[s].total_excitation;
    return op;
}

double total_excitation(const LatticeParams& params) {
    const GibbsBlocks gb = gibbs_blocks(params);
    double num = 0.0;  // vacuum contributes excitation 0
    for (const ModeGibbsElems& e : gb.modes)
        num += (e.x1 + e.y1) + 2.0 * (e.x2 + e.y2);
    for (const Eigen::Matrix4d& m : gb.pair_blocks) num += 2.0 * m.trace();
    return num / gb.Z;
}

GroundEnergyCurve ground_energy(const LatticeParams& params,
                                const std::vector<double>& g_grid) {
    params.validate();
    if (!std::is_sorted(g_grid.begin(), g_grid.end()))
        throw std::invalid_argument("ground_energy: g grid must be sorted");

    const std::vector<LevelBranch> branches = candidate_branches(params);
    GroundEnergyCurve curve;
    curve.g = g_grid;
    curve.E_g.reserve(g_grid.size());
    curve.dEg_dg.reserve(g_grid.size());

    for (double g : g_grid) {
        LatticeParams p = params;
        p.g = g;
        double best = std::numeric_limits<double>::infinity();
        std::size_t active = 0;
        for (std::size_t b = 0; b < branches.size(); ++b) {
            const double e = branches[b].energy(p);
            if (e < best) {
                best = e;
                active = b;
            }
        }
        curve.E_g.push_back(best);
        curve.dEg_dg.push_back(branches[active].energy_derivative_g(p));
    }
    return curve;
}

std::vector<std::array<double, 3>> three_lowest_levels(
    const LatticeParams& params, const std::vector<double>& g_grid) {
    params.validate();
    const std::vector<LevelBranch> branches = candidate_branches(params);
    if (branches.size() < 3)
        throw std::invalid_argument("three_lowest_levels: fewer than 3 candidate levels");

    std::vector<std::array<double, 3>> out;
    out.reserve(g_grid.size());
    std::vector<double> energies(branches.size());
    for (double g : g_grid) {
        LatticeParams p = params;
        p.g = g;
        for (std::size_t b = 0; b < branches.size(); ++b)
            energies[b] = branches[b].energy(p);
        std::partial_sort(energies.begin(), energies.begin() + 3, energies.end());
        out.push_back({energies[0], energies[1], energies[2]});
    }
    return out;
}

}  // namespace qpt
