// metrics.hpp — dense symmetric/Hermitian eigendecomposition kernel and the
// two state-distance measures built on it: trace distance and Uhlmann
// fidelity.

#pragma once

#include "qpt/spectrum.hpp"
#include "qpt/statespace.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <utility>
#include <vector>

namespace qpt {

struct EigenDecomposition {
    Eigen::VectorXd values;   // ascending
    Eigen::MatrixXd vectors;  // orthonormal columns, deterministic signs
};

// Cyclic Jacobi diagonalization of a real symmetric matrix. Deterministic:
// eigenvalues ascending, each eigenvector's largest-magnitude component
// (first occurrence) made positive. Throws std::invalid_argument when the
// input is not symmetric, NumericError when rotation sweeps fail to converge.
EigenDecomposition sym_eig(const Eigen::MatrixXd& matrix);

// Eigenvalues (ascending) of a complex Hermitian matrix via the 2n×2n real
// embedding [[Re, −Im], [Im, Re]], whose spectrum is that of the input with
// every eigenvalue doubled.
Eigen::VectorXd herm_eigvals(const Eigen::MatrixXcd& matrix);

// D = ½ Σ|d_i| over eigenvalues d_i of rho1 − rho2, computed blockwise.
double trace_distance(const DensityMatrix& rho1, const DensityMatrix& rho2);

// Marginals are diagonal, so the trace distance reduces to half the L1
// distance of the probability vectors.
double trace_distance(const AtomMarginal& a, const AtomMarginal& b);
double trace_distance(const FieldMarginal& a, const FieldMarginal& b);

// Uhlmann fidelity F = Tr√(σ^{1/2} ρ σ^{1/2}), blockwise. Eigenvalues in
// [−1e−8, 0) are clipped to zero (counted, see psd_clip_warnings); anything
// below −1e−8 raises NumericError.
double fidelity(const DensityMatrix& rho1, const DensityMatrix& rho2);

// F between the Gibbs states at g and g + delta_g for every g in the grid.
std::vector<std::pair<double, double>> gibbs_fidelity_scan(
    const LatticeParams& params, double delta_g, const std::vector<double>& g_grid);

// Diagnostics: number of small negative eigenvalues clipped during fidelity
// computations since the last reset. Thread-safe.
std::uint64_t psd_clip_warnings();
void reset_psd_clip_warnings();

}  // namespace qpt
