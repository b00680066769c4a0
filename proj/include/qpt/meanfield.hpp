// meanfield.hpp — single-site decoupling treatment of the hopping term with a
// self-consistent order parameter ψ = ⟨b⟩, grand-canonical at chemical
// potential μ, plus the two-axis map of (ψ, trace distance).

#pragma once

#include <string>
#include <vector>

namespace qpt {

struct MeanFieldParams {
    double omega_f = 3.0;
    double omega_a = 3.0;  // zero detuning by default
    double g = 1.0;
    double kappa = 0.05;
    double mu = 2.0;
    int z_coord = 2;  // chain coordination number
    int n_max = 15;   // photon cutoff
    double beta = 100.0;
    double psi_init = 0.1;
    double damping = 0.5;
    double tol = 1e-10;
    int max_iter = 10000;

    void validate() const;
};

struct MeanFieldResult {
    double psi = 0.0;             // converged order parameter, gauge-fixed ≥ 0
    double trace_distance = 0.0;  // D(ρ, ρ_atom ⊗ ρ_photon) at the fixed point
    bool converged = false;
    int iterations = 0;
    std::vector<double> residual_history;  // |map(ψ_k) − ψ_k| per iteration
};

// Damped fixed-point iteration ψ ← (1−damping)ψ + damping·Tr[b ρ(ψ)] with
// ρ(ψ) the grand-canonical Gibbs state of
//   H_MF = ω_a σ⁺σ⁻ + ω_f b†b + g(σ⁺b + σ⁻b†)
//        − zκψ(b† + b) + zκψ² − μ(σ⁺σ⁻ + b†b).
// Throws CutoffError when the top photon level carries population > 1e−8.
MeanFieldResult self_consistent_psi(const MeanFieldParams& mfp);

struct MeanFieldMapPoint {
    double axis1 = 0.0;  // κ·z/g (hopping axis)
    double axis2 = 0.0;  // (μ − ω)/g (chemical-potential axis)
    MeanFieldResult result;
    bool failed = false;
    std::string error;
};

// Grid evaluation over the two reduced axes at zero detuning; per-point
// failures are recorded in the cell, never thrown. Row-major in
// (axis1, axis2); the output order does not depend on the thread count.
std::vector<MeanFieldMapPoint> meanfield_map(const MeanFieldParams& base,
                                             const std::vector<double>& axis1_grid,
                                             const std::vector<double>& axis2_grid,
                                             int threads = 1);

// Phase-boundary extraction along the hopping axis, one entry per axis2 row:
// the first cell with ψ above threshold, and the interval with the largest
// |ΔD| (−1 when a row shows no onset / no significant change).
struct MeanFieldBoundary {
    std::vector<int> psi_onset;  // axis1 cell index per axis2 row, or −1
    std::vector<int> d_jump;     // axis1 interval index per axis2 row, or −1
    bool consistent = true;      // onset and jump are found on the same rows
    int rows_compared = 0;
    int max_cell_deviation = -1;  // −1 when no row was comparable

    static constexpr double kPsiOnsetThreshold = 1e-4;
    static constexpr double kDJumpFloor = 1e-3;
};

MeanFieldBoundary meanfield_boundary(const std::vector<MeanFieldMapPoint>& cells,
                                     int n_axis1, int n_axis2);

}  // namespace qpt
