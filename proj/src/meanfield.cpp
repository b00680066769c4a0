#include "qpt/meanfield.hpp"

#include "qpt/errors.hpp"
#include "qpt/metrics.hpp"

#include "parallel.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace qpt {

void MeanFieldParams::validate() const {
    if (!std::isfinite(omega_f) || !std::isfinite(omega_a) || !std::isfinite(mu))
        throw std::invalid_argument("MeanFieldParams: non-finite frequency or mu");
    if (!(g >= 0.0)) throw std::invalid_argument("MeanFieldParams: g must be >= 0");
    if (!(kappa >= 0.0))
        throw std::invalid_argument("MeanFieldParams: kappa must be >= 0");
    if (z_coord < 1) throw std::invalid_argument("MeanFieldParams: z_coord must be >= 1");
    if (n_max < 10)
        throw std::invalid_argument("MeanFieldParams: n_max must be >= 10");
    if (!(beta > 0.0)) throw std::invalid_argument("MeanFieldParams: beta must be > 0");
    if (!(damping > 0.0) || damping > 1.0)
        throw std::invalid_argument("MeanFieldParams: damping must be in (0, 1]");
    if (!(tol > 0.0)) throw std::invalid_argument("MeanFieldParams: tol must be > 0");
    if (max_iter < 1)
        throw std::invalid_argument("MeanFieldParams: max_iter must be >= 1");
}

namespace {

// Index convention: atom-major, idx = a·(n_max+1) + n.
Eigen::MatrixXd mf_hamiltonian(const MeanFieldParams& p, double psi) {
    const int nm = p.n_max;
    const int dim = 2 * (nm + 1);
    const double drive = p.z_coord * p.kappa;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    for (int a = 0; a < 2; ++a) {
        for (int n = 0; n <= nm; ++n) {
            const int idx = a * (nm + 1) + n;
            h(idx, idx) =
                a * p.omega_a + n * p.omega_f + drive * psi * psi - p.mu * (a + n);
        }
    }
    for (int n = 0; n < nm; ++n) {
        const double root = std::sqrt(n + 1.0);
        // exchange g(σ⁺b + σ⁻b†): couples (g, n+1) ↔ (e, n)
        h(n + 1, nm + 1 + n) += p.g * root;
        h(nm + 1 + n, n + 1) += p.g * root;
        // order-parameter drive −zκψ(b† + b)
        for (int a = 0; a < 2; ++a) {
            const int lo = a * (nm + 1) + n;
            h(lo + 1, lo) += -drive * psi;
            h(lo, lo + 1) += -drive * psi;
        }
    }
    return h;
}

Eigen::MatrixXd gibbs_of(const Eigen::MatrixXd& h, double beta) {
    const EigenDecomposition es = sym_eig(h);
    const double e0 = es.values.minCoeff();
    Eigen::VectorXd w(es.values.size());
    for (int i = 0; i < w.size(); ++i) w[i] = std::exp(-beta * (es.values[i] - e0));
    w /= w.sum();
    return es.vectors * w.asDiagonal() * es.vectors.transpose();
}

double expect_b(const Eigen::MatrixXd& rho, int n_max) {
    double v = 0.0;
    for (int a = 0; a < 2; ++a) {
        const int base = a * (n_max + 1);
        for (int n = 0; n < n_max; ++n)
            v += std::sqrt(n + 1.0) * rho(base + n + 1, base + n);
    }
    return v;
}

double product_state_distance(const Eigen::MatrixXd& rho, int n_max) {
    const int nph = n_max + 1;
    Eigen::Matrix2d rho_a = Eigen::Matrix2d::Zero();
    Eigen::MatrixXd rho_p = Eigen::MatrixXd::Zero(nph, nph);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int n = 0; n < nph; ++n)
                rho_a(a, b) += rho(a * nph + n, b * nph + n);
    for (int n = 0; n < nph; ++n)
        for (int m = 0; m < nph; ++m)
            for (int a = 0; a < 2; ++a) rho_p(n, m) += rho(a * nph + n, a * nph + m);

    Eigen::MatrixXd diff = rho;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            diff.block(a * nph, b * nph, nph, nph) -= rho_a(a, b) * rho_p;
    return 0.5 * sym_eig(diff).values.cwiseAbs().sum();
}

}  // namespace

MeanFieldResult self_consistent_psi(const MeanFieldParams& mfp) {
    mfp.validate();

    MeanFieldResult res;
    double psi = mfp.psi_init;
    Eigen::MatrixXd rho = gibbs_of(mf_hamiltonian(mfp, psi), mfp.beta);

    const auto check_cutoff = [&](const Eigen::MatrixXd& r) {
        const double top =
            r(mfp.n_max, mfp.n_max) + r(2 * mfp.n_max + 1, 2 * mfp.n_max + 1);
        if (top > 1e-8)
            throw CutoffError("self_consistent_psi: top photon level population " +
                              std::to_string(top) + " exceeds 1e-8; raise n_max");
    };

    for (int k = 0; k < mfp.max_iter; ++k) {
        check_cutoff(rho);
        const double mapped = expect_b(rho, mfp.n_max);
        const double residual = std::abs(mapped - psi);
        res.residual_history.push_back(residual);
        res.iterations = k + 1;
        if (residual < mfp.tol) {
            res.converged = true;
            break;
        }
        psi = (1.0 - mfp.damping) * psi + mfp.damping * mapped;
        rho = gibbs_of(mf_hamiltonian(mfp, psi), mfp.beta);
    }

    check_cutoff(rho);

    res.psi = std::abs(psi);  // gauge: ψ and −ψ are the same fixed point
    res.trace_distance = product_state_distance(rho, mfp.n_max);
    return res;
}

std::vector<MeanFieldMapPoint> meanfield_map(const MeanFieldParams& base,
                                             const std::vector<double>& axis1_grid,
                                             const std::vector<double>& axis2_grid,
                                             int threads) {
    if (axis1_grid.empty() || axis2_grid.empty())
        throw std::invalid_argument("meanfield_map: empty axis grid");
    if (!(base.g > 0.0))
        throw std::invalid_argument("meanfield_map: reduced axes need g > 0");

    const int n1 = static_cast<int>(axis1_grid.size());
    const int n2 = static_cast<int>(axis2_grid.size());
    std::vector<MeanFieldMapPoint> out(static_cast<std::size_t>(n1) * n2);
    parallel_for(n1 * n2, threads, [&](int idx) {
        MeanFieldMapPoint& pt = out[idx];
        pt.axis1 = axis1_grid[idx / n2];
        pt.axis2 = axis2_grid[idx % n2];
        MeanFieldParams p = base;
        p.kappa = pt.axis1 * base.g / base.z_coord;  // axis1 = κz/g
        p.mu = base.omega_f + pt.axis2 * base.g;     // axis2 = (μ−ω)/g
        try {
            pt.result = self_consistent_psi(p);
        } catch (const std::exception& e) {
            pt.failed = true;
            pt.error = e.what();
        }
    });
    return out;
}

MeanFieldBoundary meanfield_boundary(const std::vector<MeanFieldMapPoint>& cells,
                                     int n_axis1, int n_axis2) {
    if (static_cast<int>(cells.size()) != n_axis1 * n_axis2)
        throw std::invalid_argument("meanfield_boundary: cell count mismatch");

    MeanFieldBoundary b;
    b.psi_onset.assign(n_axis2, -1);
    b.d_jump.assign(n_axis2, -1);
    const auto cell = [&](int i, int j) -> const MeanFieldMapPoint& {
        return cells[static_cast<std::size_t>(i) * n_axis2 + j];
    };

    for (int j = 0; j < n_axis2; ++j) {
        for (int i = 0; i < n_axis1; ++i) {
            if (!cell(i, j).failed &&
                cell(i, j).result.psi > MeanFieldBoundary::kPsiOnsetThreshold) {
                b.psi_onset[j] = i;
                break;
            }
        }
        double best = 0.0;
        int best_i = -1;
        for (int i = 0; i + 1 < n_axis1; ++i) {
            if (cell(i, j).failed || cell(i + 1, j).failed) continue;
            const double dd = std::abs(cell(i + 1, j).result.trace_distance -
                                       cell(i, j).result.trace_distance);
            if (dd > best) {
                best = dd;
                best_i = i;
            }
        }
        if (best > MeanFieldBoundary::kDJumpFloor) b.d_jump[j] = best_i;

        const bool has_onset = b.psi_onset[j] >= 0;
        const bool has_jump = b.d_jump[j] >= 0;
        if (has_onset != has_jump) b.consistent = false;
        if (has_onset && has_jump) {
            ++b.rows_compared;
            // The jump interval (i, i+1) attributes the change to cell i+1.
            const int dev = std::abs(b.psi_onset[j] - (b.d_jump[j] + 1));
            b.max_cell_deviation = std::max(b.max_cell_deviation, dev);
        }
    }
    return b;
}

}  // namespace qpt
