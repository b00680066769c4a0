#include "qpt/statespace.hpp"

#include "qpt/errors.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace qpt {

namespace {

std::vector<std::pair<int, int>> one_photon(int mode) { return {{mode, 1}}; }

}  // namespace

StateSpace::StateSpace(int n_sites) : n_sites_(n_sites) {
    if (n_sites < 1) throw std::invalid_argument("StateSpace: n_sites must be >= 1");

    const int n = n_sites;

    // Atom configurations: none, single excitation, ordered pair.
    atom_configs_.push_back({{}, 0});
    for (int i = 1; i <= n; ++i) atom_configs_.push_back({{i}, 1});
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) atom_configs_.push_back({{i, j}, 2});

    // Field configurations: vacuum, one photon, two photons in one mode,
    // one photon in each of two modes.
    field_configs_.push_back({{}, 0});
    for (int i = 1; i <= n; ++i) field_configs_.push_back({one_photon(i), 1});
    for (int i = 1; i <= n; ++i) field_configs_.push_back({{{i, 2}}, 2});
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) field_configs_.push_back({{{i, 1}, {j, 1}}, 2});

    std::map<std::vector<int>, int> atom_idx;
    for (int c = 0; c < static_cast<int>(atom_configs_.size()); ++c)
        atom_idx[atom_configs_[c].excited] = c;
    std::map<std::vector<std::pair<int, int>>, int> field_idx;
    for (int c = 0; c < static_cast<int>(field_configs_.size()); ++c)
        field_idx[field_configs_[c].occ] = c;

    auto push = [&](Sector sec, std::vector<int> atoms,
                    std::vector<std::pair<int, int>> field) {
        BasisState s;
        s.sector = sec;
        s.atom_excited = std::move(atoms);
        s.field_occ = std::move(field);
        s.total_excitation = static_cast<int>(s.atom_excited.size());
        for (const auto& [mode, occ] : s.field_occ) s.total_excitation += occ;
        s.atom_config = atom_idx.at(s.atom_excited);
        s.field_config = field_idx.at(s.field_occ);
        lookup_[{s.atom_excited, s.field_occ}] = static_cast<int>(states_.size());
        states_.push_back(std::move(s));
    };

    // Sector I: global vacuum.
    blocks_.push_back({Sector::I, 0, 0, 0, 1});
    push(Sector::I, {}, {});

    // Sector II: one excitation per mode, photon state before atom state.
    for (int i = 1; i <= n; ++i) {
        blocks_.push_back({Sector::II, i, 0, static_cast<int>(states_.size()), 2});
        push(Sector::II, {}, one_photon(i));
        push(Sector::II, {i}, {});
    }

    // Sector III: two excitations in a single mode.
    for (int i = 1; i <= n; ++i) {
        blocks_.push_back({Sector::III, i, 0, static_cast<int>(states_.size()), 2});
        push(Sector::III, {}, {{i, 2}});
        push(Sector::III, {i}, one_photon(i));
    }

    // Sector IV: one excitation in each of two modes, tensor order with the
    // smaller mode index as the major factor.
    for (int i = 1; i <= n; ++i) {
        for (int j = i + 1; j <= n; ++j) {
            blocks_.push_back({Sector::IV, i, j, static_cast<int>(states_.size()), 4});
            push(Sector::IV, {}, {{i, 1}, {j, 1}});
            push(Sector::IV, {j}, one_photon(i));
            push(Sector::IV, {i}, one_photon(j));
            push(Sector::IV, {i, j}, {});
        }
    }
}

std::shared_ptr<const StateSpace> StateSpace::build(int n_sites) {
    return std::shared_ptr<const StateSpace>(new StateSpace(n_sites));
}

int StateSpace::index_of(const std::vector<int>& atom_excited,
                         const std::vector<std::pair<int, int>>& field_occ) const {
    auto it = lookup_.find({atom_excited, field_occ});
    if (it == lookup_.end())
        throw std::invalid_argument("StateSpace::index_of: no such basis state");
    return it->second;
}

DensityMatrix DensityMatrix::zero(std::shared_ptr<const StateSpace> space) {
    DensityMatrix rho;
    rho.space = std::move(space);
    rho.blocks.reserve(rho.space->blocks().size());
    for (const Block& b : rho.space->blocks())
        rho.blocks.push_back(Eigen::MatrixXcd::Zero(b.size, b.size));
    return rho;
}

DensityMatrix DensityMatrix::diagonal(std::shared_ptr<const StateSpace> space,
                                      const Eigen::VectorXd& populations) {
    if (populations.size() != space->dimension())
        throw std::invalid_argument("DensityMatrix::diagonal: population size mismatch");
    DensityMatrix rho = zero(std::move(space));
    for (std::size_t b = 0; b < rho.blocks.size(); ++b) {
        const Block& blk = rho.space->blocks()[b];
        for (int r = 0; r < blk.size; ++r)
            rho.blocks[b](r, r) = populations[blk.first + r];
    }
    return rho;
}

double DensityMatrix::trace() const {
    double t = 0.0;
    for (const auto& b : blocks) t += b.real().trace();
    return t;
}

Eigen::VectorXd DensityMatrix::diagonal_populations() const {
    Eigen::VectorXd p(space->dimension());
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        const Block& blk = space->blocks()[b];
        for (int r = 0; r < blk.size; ++r) p[blk.first + r] = blocks[b](r, r).real();
    }
    return p;
}

Eigen::MatrixXcd DensityMatrix::to_dense() const {
    const int d = space->dimension();
    Eigen::MatrixXcd dense = Eigen::MatrixXcd::Zero(d, d);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        const Block& blk = space->blocks()[b];
        dense.block(blk.first, blk.first, blk.size, blk.size) = blocks[b];
    }
    return dense;
}

bool DensityMatrix::is_real(double tol) const {
    for (const auto& b : blocks)
        if (b.imag().cwiseAbs().maxCoeff() > tol) return false;
    return true;
}

// Both partial traces read only the diagonal: within every block, any two
// basis states differ in both their atom and their field configuration, so
// no coherence survives either trace.
FieldMarginal partial_trace_atoms(const DensityMatrix& rho) {
    const StateSpace& sp = *rho.space;
    FieldMarginal m;
    m.p.assign(sp.field_configs().size(), 0.0);
    const Eigen::VectorXd pop = rho.diagonal_populations();
    for (int s = 0; s < sp.dimension(); ++s)
        m.p[sp.states()[s].field_config] += pop[s];
    return m;
}

AtomMarginal partial_trace_fields(const DensityMatrix& rho) {
    const StateSpace& sp = *rho.space;
    AtomMarginal m;
    m.p.assign(sp.atom_configs().size(), 0.0);
    const Eigen::VectorXd pop = rho.diagonal_populations();
    for (int s = 0; s < sp.dimension(); ++s)
        m.p[sp.states()[s].atom_config] += pop[s];
    return m;
}

DensityMatrix product_and_project(const AtomMarginal& atoms,
                                  const FieldMarginal& fields,
                                  std::shared_ptr<const StateSpace> space) {
    if (atoms.p.size() != space->atom_configs().size() ||
        fields.p.size() != space->field_configs().size())
        throw std::invalid_argument("product_and_project: marginal size mismatch");

    Eigen::VectorXd pop(space->dimension());
    for (int s = 0; s < space->dimension(); ++s) {
        const BasisState& st = space->states()[s];
        pop[s] = atoms.p[st.atom_config] * fields.p[st.field_config];
    }
    const double norm = pop.sum();
    if (!(norm > 0.0))
        throw NumericError("product_and_project: projected state has zero weight");
    pop /= norm;
    return DensityMatrix::diagonal(std::move(space), pop);
}

void write_dense(std::ostream& os, const DensityMatrix& rho) {
    const Eigen::MatrixXcd dense = rho.to_dense();
    const int d = static_cast<int>(dense.rows());
    os << "dim " << d << "\n";
    char buf[64];
    for (int r = 0; r < d; ++r) {
        for (int c = 0; c < d; ++c) {
            std::snprintf(buf, sizeof(buf), "%.16e %.16e", dense(r, c).real(),
                          dense(r, c).imag());
            os << buf << (c + 1 == d ? "\n" : "  ");
        }
    }
}

}  // namespace qpt
