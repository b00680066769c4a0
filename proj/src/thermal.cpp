#include "qpt/thermal.hpp"

#include "qpt/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace qpt {

namespace {

Eigen::Matrix4d kron2(const Eigen::Matrix2d& a, const Eigen::Matrix2d& b) {
    Eigen::Matrix4d k;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) k.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return k;
}

// Dressed-state projectors of a one-excitation block in the (photon, atom)
// basis: |+⟩ = (b, a), |−⟩ = (a, −b).
Eigen::Matrix2d proj_plus(const DressedLevel& d) {
    Eigen::Matrix2d p;
    p << d.b_n * d.b_n, d.a_n * d.b_n, d.a_n * d.b_n, d.a_n * d.a_n;
    return p;
}

Eigen::Matrix2d proj_minus(const DressedLevel& d) {
    Eigen::Matrix2d p;
    p << d.a_n * d.a_n, -d.a_n * d.b_n, -d.a_n * d.b_n, d.b_n * d.b_n;
    return p;
}

}  // namespace

GibbsBlocks gibbs_blocks(const LatticeParams& params) {
    params.validate();
    const int n = params.n_sites;
    const double beta = params.beta;
    const std::vector<NormalMode> modes = normal_modes(params);

    std::vector<DressedLevel> d1(n), d2(n);
    for (int i = 0; i < n; ++i) {
        d1[i] = dressed_level(params, modes[i], 1);
        d2[i] = dressed_level(params, modes[i], 2);
    }

    // Global energy shift: minimum over the full truncated level set, so all
    // Boltzmann exponents are non-positive.
    double shift = 0.0;
    for (int i = 0; i < n; ++i) shift = std::min({shift, d1[i].E_minus, d2[i].E_minus});
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            shift = std::min(shift, d1[i].E_minus + d1[j].E_minus);

    const auto w = [&](double energy) { return std::exp(-beta * (energy - shift)); };

    GibbsBlocks gb;
    gb.energy_shift = shift;
    gb.vacuum_weight = w(0.0);
    gb.modes.resize(n);
    gb.Z = gb.vacuum_weight;

    for (int i = 0; i < n; ++i) {
        const DressedLevel& l1 = d1[i];
        const DressedLevel& l2 = d2[i];
        ModeGibbsElems& e = gb.modes[i];
        const double wp1 = w(l1.E_plus), wm1 = w(l1.E_minus);
        const double wp2 = w(l2.E_plus), wm2 = w(l2.E_minus);
        e.x1 = l1.b_n * l1.b_n * wp1 + l1.a_n * l1.a_n * wm1;
        e.y1 = l1.a_n * l1.a_n * wp1 + l1.b_n * l1.b_n * wm1;
        e.z1 = l1.a_n * l1.b_n * (wp1 - wm1);
        e.x2 = l2.b_n * l2.b_n * wp2 + l2.a_n * l2.a_n * wm2;
        e.y2 = l2.a_n * l2.a_n * wp2 + l2.b_n * l2.b_n * wm2;
        e.z2 = l2.a_n * l2.b_n * (wp2 - wm2);
        gb.Z += e.x1 + e.y1 + e.x2 + e.y2;
    }

    // Pair blocks from pair-level weights directly (not from the shifted 2×2
    // elements, whose product would carry the shift factor twice).
    gb.pair_blocks.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (int i = 0; i < n; ++i) {
        const Eigen::Matrix2d pi_p = proj_plus(d1[i]);
        const Eigen::Matrix2d pi_m = proj_minus(d1[i]);
        for (int j = i + 1; j < n; ++j) {
            const Eigen::Matrix2d pj_p = proj_plus(d1[j]);
            const Eigen::Matrix2d pj_m = proj_minus(d1[j]);
            Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
            m += w(d1[i].E_plus + d1[j].E_plus) * kron2(pi_p, pj_p);
            m += w(d1[i].E_plus + d1[j].E_minus) * kron2(pi_p, pj_m);
            m += w(d1[i].E_minus + d1[j].E_plus) * kron2(pi_m, pj_p);
            m += w(d1[i].E_minus + d1[j].E_minus) * kron2(pi_m, pj_m);
            gb.pair_blocks.push_back(m);
            gb.Z += m.trace();
        }
    }

    if (!std::isfinite(gb.Z) || !(gb.Z > 0.0))
        throw NumericError("gibbs_blocks: partition function is not finite positive");
    return gb;
}

DensityMatrix gibbs_state(const LatticeParams& params) {
    return gibbs_state(params, StateSpace::build(params.n_sites));
}

DensityMatrix gibbs_state(const LatticeParams& params,
                          std::shared_ptr<const StateSpace> space) {
    if (space->n_sites() != params.n_sites)
        throw std::invalid_argument("gibbs_state: space size does not match params");
    const GibbsBlocks gb = gibbs_blocks(params);
    DensityMatrix rho = DensityMatrix::zero(std::move(space));

    std::size_t pair_idx = 0;
    for (std::size_t b = 0; b < rho.space->blocks().size(); ++b) {
        const Block& blk = rho.space->blocks()[b];
        switch (blk.sector) {
            case Sector::I:
                rho.blocks[b](0, 0) = gb.vacuum_weight / gb.Z;
                break;
            case Sector::II: {
                const ModeGibbsElems& e = gb.modes[blk.mode_i - 1];
                rho.blocks[b] << e.x1 / gb.Z, e.z1 / gb.Z, e.z1 / gb.Z, e.y1 / gb.Z;
                break;
            }
            case Sector::III: {
                const ModeGibbsElems& e = gb.modes[blk.mode_i - 1];
                rho.blocks[b] << e.x2 / gb.Z, e.z2 / gb.Z, e.z2 / gb.Z, e.y2 / gb.Z;
                break;
            }
            case Sector::IV:
                rho.blocks[b] = (gb.pair_blocks[pair_idx++] / gb.Z).cast<std::complex<double>>();
                break;
        }
    }
    return rho;
}

DensityMatrix factorized_state(const LatticeParams& params) {
    return factorized_state(params, StateSpace::build(params.n_sites));
}

DensityMatrix factorized_state(const LatticeParams& params,
                               std::shared_ptr<const StateSpace> space) {
    const DensityMatrix rho = gibbs_state(params, space);
    const AtomMarginal atoms = partial_trace_fields(rho);
    const FieldMarginal fields = partial_trace_atoms(rho);
    return product_and_project(atoms, fields, std::move(space));
}

std::vector<Eigen::MatrixXd> block_hamiltonians(const LatticeParams& params,
                                                const StateSpace& space) {
    params.validate();
    if (space.n_sites() != params.n_sites)
        throw std::invalid_argument("block_hamiltonians: space size mismatch");
    const std::vector<NormalMode> modes = normal_modes(params);
    const double wa = params.omega_a();
    const double g = params.g;

    auto h2 = [&](int mode_m) {
        Eigen::Matrix2d h;
        h << modes[mode_m - 1].omega_k, g, g, wa;
        return h;
    };

    std::vector<Eigen::MatrixXd> hs;
    hs.reserve(space.blocks().size());
    for (const Block& blk : space.blocks()) {
        switch (blk.sector) {
            case Sector::I:
                hs.push_back(Eigen::MatrixXd::Zero(1, 1));
                break;
            case Sector::II:
                hs.push_back(h2(blk.mode_i));
                break;
            case Sector::III: {
                const double wk = modes[blk.mode_i - 1].omega_k;
                Eigen::Matrix2d h;
                h << 2.0 * wk, std::sqrt(2.0) * g, std::sqrt(2.0) * g, wk + wa;
                hs.push_back(h);
                break;
            }
            case Sector::IV: {
                const Eigen::Matrix2d hi = h2(blk.mode_i);
                const Eigen::Matrix2d hj = h2(blk.mode_j);
                hs.push_back(kron2(hi, Eigen::Matrix2d::Identity()) +
                             kron2(Eigen::Matrix2d::Identity(), hj));
                break;
            }
        }
    }
    return hs;
}

}  // namespace qpt
