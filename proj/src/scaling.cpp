#include "qpt/scaling.hpp"

#include "qpt/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qpt {

OneExcitonClosedForm one_exciton_closed_form(const LatticeParams& params) {
    params.validate();
    const int n = params.n_sites;
    const double beta = params.beta;
    const std::vector<NormalMode> modes = normal_modes(params);

    std::vector<DressedLevel> d1(n);
    double shift = 0.0;
    for (int i = 0; i < n; ++i) {
        d1[i] = dressed_level(params, modes[i], 1);
        shift = std::min(shift, d1[i].E_minus);
    }
    const auto w = [&](double e) { return std::exp(-beta * (e - shift)); };

    std::vector<double> x(n), y(n), z(n);
    double sum_x = 0.0, sum_y = 0.0;
    for (int i = 0; i < n; ++i) {
        const DressedLevel& l = d1[i];
        const double wp = w(l.E_plus), wm = w(l.E_minus);
        x[i] = l.b_n * l.b_n * wp + l.a_n * l.a_n * wm;
        y[i] = l.a_n * l.a_n * wp + l.b_n * l.b_n * wm;
        z[i] = l.a_n * l.b_n * (wp - wm);
        sum_x += x[i];
        sum_y += y[i];
    }

    OneExcitonClosedForm cf;
    cf.energy_shift = shift;
    cf.vacuum_weight = w(0.0);
    const double w0 = cf.vacuum_weight;
    cf.Z = w0 + sum_x + sum_y;
    cf.Z_prime = (w0 + sum_x) * (w0 + sum_y) + (w0 + sum_x) * sum_x +
                 (w0 + sum_y) * sum_y;
    if (!(cf.Z > 0.0) || !(cf.Z_prime > 0.0))
        throw NumericError("one_exciton_closed_form: degenerate normalizer");

    cf.rho_x.resize(n);
    cf.rho_y.resize(n);
    cf.rho_z.resize(n);
    double d = std::abs((w0 + sum_x) * (w0 + sum_y) / cf.Z_prime - w0 / cf.Z);
    for (int i = 0; i < n; ++i) {
        cf.rho_x[i] = (w0 + sum_x) * x[i] / cf.Z_prime - x[i] / cf.Z;
        cf.rho_y[i] = (w0 + sum_y) * y[i] / cf.Z_prime - y[i] / cf.Z;
        cf.rho_z[i] = -z[i] / cf.Z;
        const double s = cf.rho_x[i] + cf.rho_y[i];
        const double root = std::sqrt((cf.rho_x[i] - cf.rho_y[i]) *
                                          (cf.rho_x[i] - cf.rho_y[i]) +
                                      4.0 * cf.rho_z[i] * cf.rho_z[i]);
        d += 0.5 * (std::abs(s - root) + std::abs(s + root));
    }
    cf.D = 0.5 * d;
    return cf;
}

double one_exciton_distance(const LatticeParams& params) {
    return one_exciton_closed_form(params).D;
}

DerivativeEstimate distance_derivative(const LatticeParams& params, double step) {
    if (!(step > 0.0))
        throw std::invalid_argument("distance_derivative: step must be positive");
    const auto d_at = [&](double g) {
        LatticeParams p = params;
        p.g = g;
        return one_exciton_distance(p);
    };
    const auto central = [&](double h) {
        return (d_at(params.g + h) - d_at(params.g - h)) / (2.0 * h);
    };
    DerivativeEstimate est;
    est.central = central(step);
    const double half = central(0.5 * step);
    est.richardson = (4.0 * half - est.central) / 3.0;
    return est;
}

std::vector<ScalingPoint> scaling_sweep(double omega_f, double delta_f,
                                        double beta,
                                        const std::vector<int>& N_range) {
    if (N_range.empty())
        throw std::invalid_argument("scaling_sweep: empty size range");
    std::vector<ScalingPoint> out;
    out.reserve(N_range.size());
    for (int n : N_range) {
        LatticeParams p;
        p.n_sites = n;
        p.omega_f = omega_f;
        p.delta_f = delta_f;
        p.kappa = 1.0;
        p.beta = beta;
        const std::vector<CriticalPoint> cps = critical_couplings(p);
        if (cps.empty())
            throw NumericError("scaling_sweep: no critical coupling for N=" +
                               std::to_string(n));
        p.g = cps.front().g_c;
        out.push_back({n, p.g, distance_derivative(p).richardson});
    }
    return out;
}

namespace {

double sse_of(const std::vector<std::pair<double, double>>& pts, double a,
              double b, double c) {
    double s = 0.0;
    for (const auto& [n, y] : pts) {
        const double r = a * std::exp(-b * n) + c - y;
        s += r * r;
    }
    return s;
}

}  // namespace

ScalingFit fit_exponential(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 4)
        throw std::invalid_argument("fit_exponential: need at least 4 points");

    // Initialization is order-independent: locate extremes by N.
    std::size_t i_min = 0, i_max = 0;
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (points[i].first < points[i_min].first) i_min = i;
        if (points[i].first > points[i_max].first) i_max = i;
    }
    const double n_min = points[i_min].first;

    double c = points[i_max].second;
    double a = points[i_min].second - c;

    // Slope of log|value − C| across the first decade in N.
    double b = 0.1;
    {
        std::vector<std::pair<double, double>> logs;
        for (const auto& [n, y] : points) {
            if (n > 10.0 * std::max(n_min, 1.0)) continue;
            const double r = (y - c) / (a != 0.0 ? a : 1.0);
            if (r > 1e-300) logs.emplace_back(n, std::log(r));
        }
        if (logs.size() >= 2) {
            double sn = 0, sl = 0, snn = 0, snl = 0;
            for (const auto& [n, l] : logs) {
                sn += n;
                sl += l;
                snn += n * n;
                snl += n * l;
            }
            const double denom = logs.size() * snn - sn * sn;
            if (std::abs(denom) > 1e-30) {
                const double slope = (logs.size() * snl - sn * sl) / denom;
                if (std::isfinite(slope) && slope < 0.0) b = -slope;
            }
        }
    }

    ScalingFit fit;
    double lambda = 1e-3;
    double sse = sse_of(points, a, b, c);
    fit.objective_history.push_back(sse);

    const int max_iter = 500;
    int iter = 0;
    bool converged = false;
    for (; iter < max_iter && !converged; ++iter) {
        Eigen::Matrix3d jtj = Eigen::Matrix3d::Zero();
        Eigen::Vector3d jtr = Eigen::Vector3d::Zero();
        for (const auto& [n, y] : points) {
            const double e = std::exp(-b * n);
            const double r = a * e + c - y;
            const Eigen::Vector3d j(e, -a * n * e, 1.0);
            jtj += j * j.transpose();
            jtr += j * r;
        }
        Eigen::Matrix3d damped = jtj;
        for (int k = 0; k < 3; ++k)
            damped(k, k) += lambda * std::max(jtj(k, k), 1e-12);
        const Eigen::Vector3d delta = damped.ldlt().solve(-jtr);
        if (!delta.allFinite()) {
            lambda *= 10.0;
            continue;
        }

        const double a2 = a + delta[0], b2 = b + delta[1], c2 = c + delta[2];
        const double sse2 = sse_of(points, a2, b2, c2);
        if (sse2 <= sse) {
            const double rel =
                delta.norm() / (Eigen::Vector3d(a, b, c).norm() + 1e-30);
            a = a2;
            b = b2;
            c = c2;
            sse = sse2;
            fit.objective_history.push_back(sse);
            lambda = std::max(lambda / 10.0, 1e-14);
            if (rel < 1e-10) converged = true;
        } else {
            lambda *= 10.0;
            if (lambda > 1e14) break;  // no acceptable step remains
        }
    }

    fit.A = a;
    fit.b = b;
    fit.C = c;
    fit.converged = converged;
    fit.iterations = iter;
    fit.rms_residual = std::sqrt(sse / static_cast<double>(points.size()));
    return fit;
}

}  // namespace qpt
