#include "qpt/statespace.hpp"
#include "qpt/errors.hpp"
#include "qpt/thermal.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

using namespace qpt;

TEST_SUITE("statespace") {

TEST_CASE("dimension counts for small lattices") {
    CHECK(StateSpace::build(1)->dimension() == 5);
    CHECK(StateSpace::build(2)->dimension() == 13);
    CHECK(StateSpace::build(5)->dimension() == 61);
    CHECK(StateSpace::build(5)->dimension() == 1 + 2 * 5 + 2 * 5 + 4 * 10);
}

TEST_CASE("states satisfy the occupation rules") {
    const auto space = StateSpace::build(5);
    for (const BasisState& st : space->states()) {
        int total = static_cast<int>(st.atom_excited.size());
        for (const auto& [mode, occ] : st.field_occ) {
            CHECK(occ >= 1);
            total += occ;
        }
        CHECK(total == st.total_excitation);
        CHECK(total <= 2);
        CHECK(std::is_sorted(st.atom_excited.begin(), st.atom_excited.end()));
        // hard-core atoms: no repeated mode index
        CHECK(std::adjacent_find(st.atom_excited.begin(), st.atom_excited.end()) ==
              st.atom_excited.end());
        switch (st.sector) {
            case Sector::I:
                CHECK(total == 0);
                break;
            case Sector::II:
                CHECK(total == 1);
                break;
            case Sector::III: {
                CHECK(total == 2);
                std::set<int> modes(st.atom_excited.begin(), st.atom_excited.end());
                for (const auto& [mode, occ] : st.field_occ) modes.insert(mode);
                CHECK(modes.size() == 1);  // both excitons share one mode index
                break;
            }
            case Sector::IV: {
                CHECK(total == 2);
                std::set<int> modes(st.atom_excited.begin(), st.atom_excited.end());
                for (const auto& [mode, occ] : st.field_occ) modes.insert(mode);
                CHECK(modes.size() == 2);
                break;
            }
        }
    }
}

TEST_CASE("blocks are disjoint, cover the space, and order their states") {
    const auto space = StateSpace::build(4);
    std::vector<int> covered(space->dimension(), 0);
    for (const Block& b : space->blocks())
        for (int i = 0; i < b.size; ++i) ++covered[b.first + i];
    CHECK(std::all_of(covered.begin(), covered.end(), [](int c) { return c == 1; }));

    for (const Block& b : space->blocks()) {
        if (b.sector == Sector::II) {
            // photon state first, then the atomic excitation
            CHECK(space->index_of({}, {{b.mode_i, 1}}) == b.first);
            CHECK(space->index_of({b.mode_i}, {}) == b.first + 1);
        }
        if (b.sector == Sector::III) {
            CHECK(space->index_of({}, {{b.mode_i, 2}}) == b.first);
            CHECK(space->index_of({b.mode_i}, {{b.mode_i, 1}}) == b.first + 1);
        }
        if (b.sector == Sector::IV) {
            CHECK(b.mode_i < b.mode_j);
            // tensor order (photon/atom of mode i) x (photon/atom of mode j)
            CHECK(space->index_of({}, {{b.mode_i, 1}, {b.mode_j, 1}}) == b.first);
            CHECK(space->index_of({b.mode_j}, {{b.mode_i, 1}}) == b.first + 1);
            CHECK(space->index_of({b.mode_i}, {{b.mode_j, 1}}) == b.first + 2);
            CHECK(space->index_of({b.mode_i, b.mode_j}, {}) == b.first + 3);
        }
    }
    CHECK_THROWS(space->index_of({1, 2, 3}, {}));
}

TEST_CASE("diagonal density matrix bookkeeping") {
    const auto space = StateSpace::build(2);
    Eigen::VectorXd pop = Eigen::VectorXd::Zero(space->dimension());
    pop[0] = 0.25;
    pop[space->index_of({}, {{1, 1}})] = 0.75;
    const DensityMatrix rho = DensityMatrix::diagonal(space, pop);
    CHECK(std::abs(rho.trace() - 1.0) < 1e-15);
    CHECK(rho.is_real());
    CHECK((rho.diagonal_populations() - pop).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(rho.to_dense().rows() == 13);
}

TEST_CASE("marginals of simple states") {
    const auto space = StateSpace::build(2);

    Eigen::VectorXd vac = Eigen::VectorXd::Zero(space->dimension());
    vac[0] = 1.0;
    const DensityMatrix rho0 = DensityMatrix::diagonal(space, vac);
    const FieldMarginal fm0 = partial_trace_atoms(rho0);
    const AtomMarginal am0 = partial_trace_fields(rho0);
    CHECK(std::abs(fm0.p[0] - 1.0) < 1e-15);
    CHECK(std::abs(am0.p[0] - 1.0) < 1e-15);

    // equal mixture of one photon / one atomic excitation in mode 1
    Eigen::VectorXd mix = Eigen::VectorXd::Zero(space->dimension());
    mix[space->index_of({}, {{1, 1}})] = 0.5;
    mix[space->index_of({1}, {})] = 0.5;
    const DensityMatrix rho1 = DensityMatrix::diagonal(space, mix);
    const FieldMarginal fm1 = partial_trace_atoms(rho1);
    const AtomMarginal am1 = partial_trace_fields(rho1);

    double f_vac = 0, f_one = 0;
    for (std::size_t c = 0; c < fm1.p.size(); ++c) {
        const FieldConfig& fc = space->field_configs()[c];
        if (fc.occ.empty()) f_vac = fm1.p[c];
        if (fc.occ == std::vector<std::pair<int, int>>{{1, 1}}) f_one = fm1.p[c];
    }
    CHECK(std::abs(f_vac - 0.5) < 1e-15);
    CHECK(std::abs(f_one - 0.5) < 1e-15);

    double a_none = 0, a_one = 0;
    for (std::size_t c = 0; c < am1.p.size(); ++c) {
        const AtomConfig& ac = space->atom_configs()[c];
        if (ac.excited.empty()) a_none = am1.p[c];
        if (ac.excited == std::vector<int>{1}) a_one = am1.p[c];
    }
    CHECK(std::abs(a_none - 0.5) < 1e-15);
    CHECK(std::abs(a_one - 0.5) < 1e-15);
}

TEST_CASE("marginals match the brute-force partial trace of a Gibbs state") {
    LatticeParams p;
    p.n_sites = 2;
    p.omega_f = 3.0;
    p.delta_f = 0.0;
    p.g = 1.0;
    p.kappa = 1.0;
    p.beta = 5.0;
    const auto space = StateSpace::build(2);
    const DensityMatrix rho = gibbs_state(p, space);

    const oracle::DenseEmbedding emb = oracle::embed_full(rho);
    CHECK(std::abs(emb.rho.trace().real() - 1.0) < 1e-12);

    const Eigen::MatrixXcd field = oracle::brute_trace_out_atoms(emb);
    const Eigen::MatrixXcd atoms = oracle::brute_trace_out_field(emb);
    // both marginals are diagonal in the occupation basis
    CHECK((field - Eigen::MatrixXcd(field.diagonal().asDiagonal()))
              .cwiseAbs()
              .maxCoeff() < 1e-14);
    CHECK((atoms - Eigen::MatrixXcd(atoms.diagonal().asDiagonal()))
              .cwiseAbs()
              .maxCoeff() < 1e-14);

    const FieldMarginal fm = partial_trace_atoms(rho);
    for (std::size_t c = 0; c < fm.p.size(); ++c) {
        const int fi = oracle::field_index(space->field_configs()[c].occ, 2);
        CHECK(std::abs(fm.p[c] - field(fi, fi).real()) < 1e-12);
    }
    const AtomMarginal am = partial_trace_fields(rho);
    for (std::size_t c = 0; c < am.p.size(); ++c) {
        const int ai = oracle::atom_index(space->atom_configs()[c].excited);
        CHECK(std::abs(am.p[c] - atoms(ai, ai).real()) < 1e-12);
    }
}

TEST_CASE("projected product state of vacuum marginals is the vacuum") {
    const auto space = StateSpace::build(3);
    AtomMarginal am;
    am.p.assign(space->atom_configs().size(), 0.0);
    am.p[0] = 1.0;
    FieldMarginal fm;
    fm.p.assign(space->field_configs().size(), 0.0);
    fm.p[0] = 1.0;
    const DensityMatrix prod = product_and_project(am, fm, space);
    CHECK(std::abs(prod.trace() - 1.0) < 1e-15);
    CHECK(std::abs(prod.diagonal_populations()[0] - 1.0) < 1e-15);
}

TEST_CASE("projected product of Gibbs marginals is a diagonal PSD state") {
    LatticeParams p;
    p.n_sites = 2;
    p.beta = 5.0;
    p.g = 1.0;
    const auto space = StateSpace::build(2);
    const DensityMatrix rho = gibbs_state(p, space);
    const DensityMatrix prod =
        product_and_project(partial_trace_fields(rho), partial_trace_atoms(rho), space);
    CHECK(std::abs(prod.trace() - 1.0) < 1e-12);
    for (const Eigen::MatrixXcd& b : prod.blocks) {
        CHECK((b - Eigen::MatrixXcd(b.diagonal().asDiagonal())).cwiseAbs().maxCoeff() <
              1e-14);
        CHECK(oracle::eigvals(b).minCoeff() > -1e-12);
    }
}

TEST_CASE("product of marginals with no overlap in the truncation throws") {
    const auto space = StateSpace::build(2);
    AtomMarginal am;
    am.p.assign(space->atom_configs().size(), 0.0);
    FieldMarginal fm;
    fm.p.assign(space->field_configs().size(), 0.0);
    // atoms fully doubly-excited and field fully doubly-occupied can never
    // combine below the two-exciton ceiling
    am.p.back() = 1.0;
    fm.p.back() = 1.0;
    CHECK_THROWS_AS(product_and_project(am, fm, space), NumericError);
}

TEST_CASE("dense dump carries the dimension header and all entries") {
    const auto space = StateSpace::build(1);
    Eigen::VectorXd pop = Eigen::VectorXd::Zero(space->dimension());
    pop[0] = 1.0;
    std::ostringstream os;
    write_dense(os, DensityMatrix::diagonal(space, pop));
    std::istringstream is(os.str());
    std::string word;
    is >> word;
    CHECK(word == "dim");
    int dim = 0;
    is >> dim;
    CHECK(dim == 5);
    int count = 0;
    double v;
    while (is >> v) ++count;
    CHECK(count == 2 * 5 * 5);
}

}  // TEST_SUITE
