#include "qpt/metrics.hpp"

#include "qpt/errors.hpp"
#include "qpt/thermal.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <stdexcept>

namespace qpt {

namespace {

std::atomic<std::uint64_t> g_psd_clip_count{0};

constexpr double kPsdFloor = -1e-8;

// Clip policy shared by all fidelity square roots.
double clip_psd(double lambda) {
    if (lambda >= 0.0) return lambda;
    if (lambda < kPsdFloor)
        throw NumericError("fidelity: eigenvalue " + std::to_string(lambda) +
                           " violates positive semidefiniteness");
    g_psd_clip_count.fetch_add(1, std::memory_order_relaxed);
    return 0.0;
}

double sum_abs(const Eigen::VectorXd& v) { return v.cwiseAbs().sum(); }

// Fidelity of one real symmetric block pair.
double fidelity_block(const Eigen::MatrixXd& rho, const Eigen::MatrixXd& sigma) {
    const EigenDecomposition es = sym_eig(sigma);
    Eigen::VectorXd root(es.values.size());
    for (int i = 0; i < root.size(); ++i) root[i] = std::sqrt(clip_psd(es.values[i]));
    const Eigen::MatrixXd sqrt_sigma =
        es.vectors * root.asDiagonal() * es.vectors.transpose();
    Eigen::MatrixXd m = sqrt_sigma * rho * sqrt_sigma;
    m = 0.5 * (m + m.transpose().eval());  // symmetrize roundoff
    const EigenDecomposition em = sym_eig(m);
    double f = 0.0;
    for (int i = 0; i < em.values.size(); ++i) f += std::sqrt(clip_psd(em.values[i]));
    return f;
}

Eigen::MatrixXd real_embedding(const Eigen::MatrixXcd& m) {
    const int n = static_cast<int>(m.rows());
    Eigen::MatrixXd e(2 * n, 2 * n);
    e.topLeftCorner(n, n) = m.real();
    e.bottomRightCorner(n, n) = m.real();
    e.topRightCorner(n, n) = -m.imag();
    e.bottomLeftCorner(n, n) = m.imag();
    return e;
}

bool block_is_real(const Eigen::MatrixXcd& m) {
    return m.imag().cwiseAbs().maxCoeff() < 1e-14;
}

void check_same_space(const DensityMatrix& a, const DensityMatrix& b,
                      const char* where) {
    if (!a.space || !b.space || a.space->n_sites() != b.space->n_sites() ||
        a.space->dimension() != b.space->dimension() ||
        a.blocks.size() != b.blocks.size())
        throw std::invalid_argument(std::string(where) + ": state spaces differ");
}

}  // namespace

EigenDecomposition sym_eig(const Eigen::MatrixXd& matrix) {
    if (matrix.rows() != matrix.cols())
        throw std::invalid_argument("sym_eig: matrix is not square");
    const int n = static_cast<int>(matrix.rows());
    const double scale = std::max(1.0, matrix.cwiseAbs().maxCoeff());
    if ((matrix - matrix.transpose().eval()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw std::invalid_argument("sym_eig: matrix is not symmetric");

    Eigen::MatrixXd a = 0.5 * (matrix + matrix.transpose().eval());
    Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);

    const double frob = std::max(a.norm(), 1e-300);
    const double stop = 1e-15 * frob;
    const int max_sweeps = 100;

    int sweep = 0;
    for (; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += 2.0 * a(p, q) * a(p, q);
        if (std::sqrt(off) <= stop) break;

        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::abs(apq) <= 1e-300) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t =
                    (theta >= 0.0 ? 1.0 : -1.0) /
                    (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);

                a(p, p) -= t * apq;
                a(q, q) += t * apq;
                a(p, q) = a(q, p) = 0.0;
                for (int i = 0; i < n; ++i) {
                    if (i == p || i == q) continue;
                    const double aip = a(i, p);
                    const double aiq = a(i, q);
                    a(i, p) = a(p, i) = aip - s * (aiq + tau * aip);
                    a(i, q) = a(q, i) = aiq + s * (aip - tau * aiq);
                }
                for (int i = 0; i < n; ++i) {
                    const double vip = v(i, p);
                    const double viq = v(i, q);
                    v(i, p) = vip - s * (viq + tau * vip);
                    v(i, q) = viq + s * (vip - tau * viq);
                }
            }
        }
    }
    if (sweep == max_sweeps)
        throw NumericError("sym_eig: Jacobi sweeps did not converge");

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return a(i, i) < a(j, j); });

    EigenDecomposition out;
    out.values.resize(n);
    out.vectors.resize(n, n);
    for (int j = 0; j < n; ++j) {
        out.values[j] = a(order[j], order[j]);
        out.vectors.col(j) = v.col(order[j]);
        int imax = 0;
        for (int i = 1; i < n; ++i)
            if (std::abs(out.vectors(i, j)) > std::abs(out.vectors(imax, j))) imax = i;
        if (out.vectors(imax, j) < 0.0) out.vectors.col(j) = -out.vectors.col(j);
    }
    return out;
}

Eigen::VectorXd herm_eigvals(const Eigen::MatrixXcd& matrix) {
    if (matrix.rows() != matrix.cols())
        throw std::invalid_argument("herm_eigvals: matrix is not square");
    const double scale = std::max(1.0, matrix.cwiseAbs().maxCoeff());
    if ((matrix - matrix.adjoint().eval()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw std::invalid_argument("herm_eigvals: matrix is not Hermitian");
    const int n = static_cast<int>(matrix.rows());
    const Eigen::MatrixXcd h = 0.5 * (matrix + matrix.adjoint().eval());
    const EigenDecomposition es = sym_eig(real_embedding(h));
    Eigen::VectorXd vals(n);
    for (int i = 0; i < n; ++i) vals[i] = es.values[2 * i];  // doubled spectrum
    return vals;
}

double trace_distance(const DensityMatrix& rho1, const DensityMatrix& rho2) {
    check_same_space(rho1, rho2, "trace_distance");
    double sum = 0.0;
    for (std::size_t b = 0; b < rho1.blocks.size(); ++b) {
        const Eigen::MatrixXcd diff = rho1.blocks[b] - rho2.blocks[b];
        if (block_is_real(diff))
            sum += sum_abs(sym_eig(diff.real()).values);
        else
            sum += sum_abs(herm_eigvals(diff));
    }
    return 0.5 * sum;
}

double trace_distance(const AtomMarginal& a, const AtomMarginal& b) {
    if (a.p.size() != b.p.size())
        throw std::invalid_argument("trace_distance: marginal sizes differ");
    double sum = 0.0;
    for (std::size_t i = 0; i < a.p.size(); ++i) sum += std::abs(a.p[i] - b.p[i]);
    return 0.5 * sum;
}

double trace_distance(const FieldMarginal& a, const FieldMarginal& b) {
    if (a.p.size() != b.p.size())
        throw std::invalid_argument("trace_distance: marginal sizes differ");
    double sum = 0.0;
    for (std::size_t i = 0; i < a.p.size(); ++i) sum += std::abs(a.p[i] - b.p[i]);
    return 0.5 * sum;
}

double fidelity(const DensityMatrix& rho1, const DensityMatrix& rho2) {
    check_same_space(rho1, rho2, "fidelity");
    double f = 0.0;
    for (std::size_t b = 0; b < rho1.blocks.size(); ++b) {
        const Eigen::MatrixXcd& r = rho1.blocks[b];
        const Eigen::MatrixXcd& s = rho2.blocks[b];
        if (block_is_real(r) && block_is_real(s)) {
            f += fidelity_block(r.real(), s.real());
        } else {
            // The real embedding is a *-homomorphism, so the embedded
            // fidelity is exactly twice the complex one.
            f += 0.5 * fidelity_block(real_embedding(r), real_embedding(s));
        }
    }
    return f;
}

std::vector<std::pair<double, double>> gibbs_fidelity_scan(
    const LatticeParams& params, double delta_g, const std::vector<double>& g_grid) {
    if (!(delta_g > 0.0))
        throw std::invalid_argument("gibbs_fidelity_scan: delta_g must be positive");
    auto space = StateSpace::build(params.n_sites);
    std::vector<std::pair<double, double>> out;
    out.reserve(g_grid.size());
    for (double g : g_grid) {
        LatticeParams p1 = params;
        p1.g = g;
        LatticeParams p2 = params;
        p2.g = g + delta_g;
        out.emplace_back(g, fidelity(gibbs_state(p1, space), gibbs_state(p2, space)));
    }
    return out;
}

std::uint64_t psd_clip_warnings() {
    return g_psd_clip_count.load(std::memory_order_relaxed);
}

void reset_psd_clip_warnings() {
    g_psd_clip_count.store(0, std::memory_order_relaxed);
}

}  // namespace qpt
