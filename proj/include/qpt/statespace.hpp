// statespace.hpp — truncated two-exciton occupation basis in the normal-mode
// picture, block structure, marginals over the atom/field factors, and the
// projected product state.

#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <map>
#include <memory>
#include <utility>
#include <vector>

namespace qpt {

enum class Sector { I, II, III, IV };

// Occupation label of one basis state. Atomic modes are hard-core
// (occupation 0/1); field modes hold up to two photons in total.
struct BasisState {
    Sector sector = Sector::I;
    std::vector<int> atom_excited;               // sorted mode indices, 1-based
    std::vector<std::pair<int, int>> field_occ;  // sorted (mode, occupation)
    int total_excitation = 0;
    int atom_config = 0;   // index into StateSpace::atom_configs()
    int field_config = 0;  // index into StateSpace::field_configs()
};

// One diagonal block of the Hamiltonian / Gibbs state.
struct Block {
    Sector sector = Sector::I;
    int mode_i = 0;  // block mode (II, III) or smaller pair index (IV)
    int mode_j = 0;  // larger pair index (IV), otherwise 0
    int first = 0;   // index of the first state in the block
    int size = 1;    // 1, 2 or 4
};

struct AtomConfig {
    std::vector<int> excited;  // sorted mode indices, size 0..2
    int total = 0;
};

struct FieldConfig {
    std::vector<std::pair<int, int>> occ;  // sorted (mode, occupation), total <= 2
    int total = 0;
};

class StateSpace {
  public:
    static std::shared_ptr<const StateSpace> build(int n_sites);

    int n_sites() const { return n_sites_; }
    int dimension() const { return static_cast<int>(states_.size()); }
    const std::vector<BasisState>& states() const { return states_; }
    const std::vector<Block>& blocks() const { return blocks_; }
    const std::vector<AtomConfig>& atom_configs() const { return atom_configs_; }
    const std::vector<FieldConfig>& field_configs() const { return field_configs_; }

    // Position of the state with the given occupations; throws if absent.
    int index_of(const std::vector<int>& atom_excited,
                 const std::vector<std::pair<int, int>>& field_occ) const;

  private:
    explicit StateSpace(int n_sites);

    int n_sites_;
    std::vector<BasisState> states_;
    std::vector<Block> blocks_;
    std::vector<AtomConfig> atom_configs_;
    std::vector<FieldConfig> field_configs_;
    std::map<std::pair<std::vector<int>, std::vector<std::pair<int, int>>>, int> lookup_;
};

// Block-diagonal Hermitian operator over a StateSpace. Equilibrium states are
// real symmetric; dynamics produces complex Hermitian blocks.
struct DensityMatrix {
    std::shared_ptr<const StateSpace> space;
    std::vector<Eigen::MatrixXcd> blocks;  // aligned with space->blocks()

    static DensityMatrix zero(std::shared_ptr<const StateSpace> space);
    // Diagonal state from per-basis-state populations.
    static DensityMatrix diagonal(std::shared_ptr<const StateSpace> space,
                                  const Eigen::VectorXd& populations);

    double trace() const;
    Eigen::VectorXd diagonal_populations() const;
    Eigen::MatrixXcd to_dense() const;
    bool is_real(double tol = 1e-14) const;
};

// Diagonal marginal over atom configurations (the system part rho_S).
struct AtomMarginal {
    std::vector<double> p;  // aligned with StateSpace::atom_configs()
};

// Diagonal marginal over field configurations (the environment part rho_E).
struct FieldMarginal {
    std::vector<double> p;  // aligned with StateSpace::field_configs()
};

// Trace over the atom factor. The result is diagonal because every coherence
// in the block structure connects distinct field configurations.
FieldMarginal partial_trace_atoms(const DensityMatrix& rho);

// Trace over the field factor; mirror of partial_trace_atoms.
AtomMarginal partial_trace_fields(const DensityMatrix& rho);

// Tensor product of the two diagonal marginals, projected onto the
// truncated sector (total excitation <= 2) and renormalized to unit trace.
DensityMatrix product_and_project(const AtomMarginal& atoms,
                                  const FieldMarginal& fields,
                                  std::shared_ptr<const StateSpace> space);

// Plain-text dump of the dense matrix, row-major, scientific notation with
// 17 significant digits, entries as "re im" pairs.
void write_dense(std::ostream& os, const DensityMatrix& rho);

}  // namespace qpt
