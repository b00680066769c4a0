// observables.hpp — transition witnesses: thermal total-excitation number and
// the ground-level energy curve with its analytic coupling derivative.

#pragma once

#include "qpt/spectrum.hpp"
#include "qpt/statespace.hpp"

#include <Eigen/Dense>

#include <array>
#include <vector>

namespace qpt {

// Diagonal operator counting atomic plus photonic excitations per basis state.
struct ExcitationOperator {
    Eigen::VectorXd diag;
};

ExcitationOperator excitation_operator(const StateSpace& space);

// Tr[ρ_Gibbs · N̂]; lies in [0, 2] on the truncated space.
double total_excitation(const LatticeParams& params);

// Lowest level energy over the candidate branch set per grid point, with the
// analytic derivative of whichever branch is active. Jumps in dEg_dg mark the
// critical couplings.
struct GroundEnergyCurve {
    std::vector<double> g;
    std::vector<double> E_g;
    std::vector<double> dEg_dg;
};

GroundEnergyCurve ground_energy(const LatticeParams& params,
                                const std::vector<double>& g_grid);

// Three smallest candidate level energies per grid point, sorted ascending.
std::vector<std::array<double, 3>> three_lowest_levels(
    const LatticeParams& params, const std::vector<double>& g_grid);

}  // namespace qpt
