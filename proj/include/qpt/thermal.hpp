// thermal.hpp — closed-form Gibbs-state blocks at inverse temperature beta,
// the assembled thermal state, its factorized (product-of-marginals)
// comparison state, and the block Hamiltonians that generate them.

#pragma once

#include "qpt/spectrum.hpp"
#include "qpt/statespace.hpp"

#include <Eigen/Dense>

#include <memory>
#include <vector>

namespace qpt {

// One-mode unnormalized Gibbs elements for excitation number n = 1, 2:
//   x_n = b_n² w(E_n^+) + a_n² w(E_n^−)
//   y_n = a_n² w(E_n^+) + b_n² w(E_n^−)
//   z_n = a_n b_n (w(E_n^+) − w(E_n^−))
// where w(E) = exp(−β(E − shift)).
struct ModeGibbsElems {
    double x1 = 0, y1 = 0, z1 = 0;
    double x2 = 0, y2 = 0, z2 = 0;
};

// Unnormalized block elements of e^{−βH} in the truncated basis.
//
// All weights carry a common factor e^{β·energy_shift}, with energy_shift the
// minimum level energy over the truncated spectrum. The shift cancels in
// ρ = blocks / Z but keeps every exponent non-positive, which is what makes
// κβ = 800 with negative dressed energies representable in doubles. When all
// level energies are non-negative the shift is zero and the elements coincide
// with the textbook expressions (vacuum_weight = 1).
struct GibbsBlocks {
    double energy_shift = 0.0;   // min level energy (≤ 0; vacuum sits at 0)
    double vacuum_weight = 1.0;  // w(0) = e^{β·energy_shift}
    std::vector<ModeGibbsElems> modes;        // index m−1
    std::vector<Eigen::Matrix4d> pair_blocks; // pairs i<j, lexicographic
    double Z = 1.0;                           // shifted partition function
};

GibbsBlocks gibbs_blocks(const LatticeParams& params);

// e^{−βH}/Z placed into the StateSpace block layout; unit trace, PSD.
DensityMatrix gibbs_state(const LatticeParams& params);
DensityMatrix gibbs_state(const LatticeParams& params,
                          std::shared_ptr<const StateSpace> space);

// Product of the Gibbs state's atom and field marginals, projected back onto
// the truncated space and renormalized.
DensityMatrix factorized_state(const LatticeParams& params);
DensityMatrix factorized_state(const LatticeParams& params,
                               std::shared_ptr<const StateSpace> space);

// Hamiltonian blocks aligned with space.blocks(): [0] for the vacuum,
// [[ω_i, g], [g, ω_a]] and [[2ω_i, √2g], [√2g, ω_i+ω_a]] per mode,
// H_i ⊗ I + I ⊗ H_j per pair.
std::vector<Eigen::MatrixXd> block_hamiltonians(const LatticeParams& params,
                                                const StateSpace& space);

}  // namespace qpt
