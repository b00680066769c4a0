// spectrum.hpp — normal modes of the photon-hopping chain, dressed
// eigen-systems of the effective cavities, and ground-state level crossings.

#pragma once

#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace qpt {

// Physical parameters of the cavity lattice. The hopping rate kappa is the
// unit scale: all energies and beta are expressed in units of kappa, k_B = 1.
struct LatticeParams {
    int n_sites = 5;
    double omega_f = 3.0;  // field mode frequency
    double delta_f = 0.0;  // bare detuning omega_a - omega_f
    double g = 1.0;        // atom-field coupling
    double kappa = 1.0;    // photon hopping rate
    double beta = 800.0;   // inverse temperature

    double omega_a() const { return omega_f + delta_f; }

    // Throws std::invalid_argument if any invariant is violated
    // (N >= 1, kappa > 0, beta > 0, omega_f > 2*kappa, g >= 0).
    void validate() const;
};

// One normal mode of the open chain.
struct NormalMode {
    int m = 0;             // mode index, 1..N
    double k = 0.0;        // wavenumber 2*pi*m/(N+1)
    double omega_k = 0.0;  // omega_f + 2*kappa*cos(k/2)
    double delta_k = 0.0;  // omega_a - omega_k
};

// Dressed eigen-system of one effective cavity at excitation n >= 1.
// The explicit zero level E_0^- = 0 is not represented here.
struct DressedLevel {
    int n = 1;
    NormalMode mode;
    double a_n = 0.0;      // upper mixing amplitude
    double b_n = 0.0;      // lower mixing amplitude
    double Omega_n = 0.0;  // sqrt(delta_k^2 + 4 g^2 n)
    double E_plus = 0.0;   // n*omega_k + delta_k/2 + Omega_n/2
    double E_minus = 0.0;  // n*omega_k + delta_k/2 - Omega_n/2
};

// Coupling at which the ground state changes branch.
struct CriticalPoint {
    int mode_m = 0;
    double g_c = 0.0;
};

// Candidate ground-state branch within the two-exciton truncation,
// written as occupations (mode m, excitation n) of minus-dressed levels.
// An empty occupation list is the vacuum branch.
struct LevelBranch {
    std::vector<std::pair<int, int>> occ;

    std::string label() const;
    double energy(const LatticeParams& params) const;
    double energy_derivative_g(const LatticeParams& params) const;
};

std::vector<NormalMode> normal_modes(const LatticeParams& params);

DressedLevel dressed_level(const LatticeParams& params, const NormalMode& mode,
                           int n);

// All candidate ground branches: vacuum, E_n^-(k) for n in {1,2}, and
// pairwise sums E_1^-(k) + E_1^-(k') for k != k'.
std::vector<LevelBranch> candidate_branches(const LatticeParams& params);

// Roots of E_1^-(k) = 0 in g, i.e. g_c(m) = sqrt(omega_k * omega_a), one per
// mode with omega_k*omega_a > 0, sorted ascending and restricted to
// [g_lo, g_hi].
std::vector<CriticalPoint> critical_couplings(
    const LatticeParams& params, double g_lo = 0.0,
    double g_hi = std::numeric_limits<double>::infinity());

// Numeric crossing detector: scans the lowest candidate branch over
// [g_lo, g_hi] and refines every argmin change by bisection to `tolerance`.
// Tangential touches without a sign change are not reported.
std::vector<CriticalPoint> detect_crossings(const LatticeParams& params,
                                            double g_lo, double g_hi,
                                            double tolerance);

}  // namespace qpt
