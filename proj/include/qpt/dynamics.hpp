// dynamics.hpp — unitary evolution of the factorized thermal state under the
// block-diagonal Hamiltonian, and the time-maximum of the atom-marginal trace
// distance D(ρ_S(0), ρ_S(t)).

#pragma once

#include "qpt/spectrum.hpp"
#include "qpt/statespace.hpp"

#include <vector>

namespace qpt {

struct TimeGrid {
    double t_max = 0.0;  // horizon in units of 1/κ
    double dt = 0.0;
    int count = 0;  // grid points including t = 0

    double time(int i) const { return dt * i; }
};

// Largest eigenvalue spread within any Hamiltonian block (the fastest
// oscillation frequency of the dynamics).
double max_block_gap(const LatticeParams& params);

// Step chosen as dt = 0.05 / max_block_gap, well inside the dt·gap ≤ 0.1
// resolution bound; for a gapless spectrum dt falls back to t_max / 200.
TimeGrid make_time_grid(const LatticeParams& params, double t_max = 200.0);

// ρ(t) = U ρ0 U† with U = exp(−iHt), applied per block via eigendecomposition.
DensityMatrix evolve(const DensityMatrix& rho0, const LatticeParams& params,
                     double t);

struct TrajectoryResult {
    std::vector<double> times;
    std::vector<double> distances;  // D(ρ_S(0), ρ_S(t))
    double max_distance = 0.0;
    double argmax_time = 0.0;  // earliest time attaining the maximum
};

// Initial state factorized_state(params); distances of the atom marginal to
// its t = 0 value over the grid. Uses the closed-form population propagator
// (the initial state is diagonal, so only block populations evolve the
// marginal).
TrajectoryResult max_trace_distance_trajectory(const LatticeParams& params,
                                               const TimeGrid& grid);

}  // namespace qpt
