#include "qpt/experiments.hpp"

#include "qpt/dynamics.hpp"
#include "qpt/errors.hpp"
#include "qpt/jump_detect.hpp"
#include "qpt/meanfield.hpp"
#include "qpt/metrics.hpp"
#include "qpt/observables.hpp"
#include "qpt/output_table.hpp"
#include "qpt/scaling.hpp"
#include "qpt/spectrum.hpp"
#include "qpt/thermal.hpp"
#include "qpt/version.hpp"

#include "parallel.hpp"

#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>
#include <sstream>

namespace qpt {

namespace {

using nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> linspace(double lo, double hi, int n) {
    if (n < 2) return {lo};
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
    v.back() = hi;
    return v;
}

LatticeParams lattice_from(const RunConfig& cfg) {
    LatticeParams p;
    p.n_sites = cfg.get_int("n_sites");
    p.omega_f = cfg.get_double("omega_f");
    p.delta_f = cfg.get_double("delta_f");
    p.kappa = cfg.get_double("kappa");
    if (cfg.has("beta")) p.beta = cfg.get_double("beta");
    return p;
}

std::string timestamp_utc() {
    const std::time_t now =
        std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

template <typename F>
double guarded(std::atomic<int>& failures, F&& f) {
    try {
        return f();
    } catch (const NumericError&) {
        failures.fetch_add(1, std::memory_order_relaxed);
        return kNaN;
    }
}

json jumps_json(const std::vector<Jump>& jumps) {
    json arr = json::array();
    for (const Jump& j : jumps)
        arr.push_back({{"x", j.x}, {"magnitude", j.magnitude}});
    return arr;
}

json detector_json() {
    return {{"window", kJumpWindow},
            {"sigma_factor", kJumpSigmaFactor},
            {"floor_factor", kJumpFloorFactor}};
}

json criticals_json(const std::vector<CriticalPoint>& cps) {
    json arr = json::array();
    for (const CriticalPoint& c : cps)
        arr.push_back({{"mode_m", c.mode_m}, {"g_c", c.g_c}});
    return arr;
}

// Jump detection on the finite subset of a sampled curve.
json finite_jumps_json(const std::vector<double>& xs, const std::vector<double>& ys) {
    std::vector<double> fx, fy;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (std::isfinite(ys[i])) {
            fx.push_back(xs[i]);
            fy.push_back(ys[i]);
        }
    }
    if (fx.size() < 3) return json::array();
    return jumps_json(detect_jump(fx, fy));
}

struct ExperimentOutput {
    OutputTable table;
    json summary = json::object();
    int numeric_failures = 0;
};

ExperimentOutput run_spectrum(const RunConfig& cfg, int /*threads*/) {
    const LatticeParams base = lattice_from(cfg);
    const std::vector<double> gs = linspace(
        cfg.get_double("g_min"), cfg.get_double("g_max"), cfg.get_int("g_steps"));
    const auto levels = three_lowest_levels(base, gs);

    ExperimentOutput out;
    out.table.columns = {"g", "level_1", "level_2", "level_3"};
    for (std::size_t i = 0; i < gs.size(); ++i)
        out.table.add_row({gs[i], levels[i][0], levels[i][1], levels[i][2]});

    out.summary["critical_couplings"] =
        criticals_json(critical_couplings(base, gs.front(), gs.back()));
    out.summary["detected_crossings"] =
        criticals_json(detect_crossings(base, gs.front(), gs.back(), 1e-10));
    return out;
}

ExperimentOutput run_phase_diagram(const RunConfig& cfg, int threads) {
    const LatticeParams base = lattice_from(cfg);
    const std::vector<double> deltas = linspace(cfg.get_double("delta_min"),
                                                cfg.get_double("delta_max"),
                                                cfg.get_int("delta_steps"));
    const std::vector<double> gs = linspace(
        cfg.get_double("g_min"), cfg.get_double("g_max"), cfg.get_int("g_steps"));

    const int nd = static_cast<int>(deltas.size());
    const int ng = static_cast<int>(gs.size());
    std::vector<double> exc(static_cast<std::size_t>(nd) * ng);
    std::atomic<int> failures{0};
    parallel_for(nd * ng, threads, [&](int idx) {
        exc[idx] = guarded(failures, [&] {
            LatticeParams p = base;
            p.delta_f = deltas[idx / ng];
            p.g = gs[idx % ng];
            return total_excitation(p);
        });
    });

    ExperimentOutput out;
    out.table.columns = {"delta_f", "g", "excitation"};
    for (int di = 0; di < nd; ++di)
        for (int gi = 0; gi < ng; ++gi)
            out.table.add_row({deltas[di], gs[gi], exc[di * ng + gi]});
    out.numeric_failures = failures.load();
    out.summary["grid"] = {{"delta_points", nd}, {"g_points", ng}};
    return out;
}

ExperimentOutput run_fidelity(const RunConfig& cfg, int threads) {
    const LatticeParams base = lattice_from(cfg);
    const std::vector<double> betas = cfg.get_list("beta_list");
    const double delta_g = cfg.get_double("delta_g");
    const std::vector<double> gs = linspace(
        cfg.get_double("g_min"), cfg.get_double("g_max"), cfg.get_int("g_steps"));
    const auto space = StateSpace::build(base.n_sites);

    const int nb = static_cast<int>(betas.size());
    const int ng = static_cast<int>(gs.size());
    std::vector<double> fid(static_cast<std::size_t>(nb) * ng);
    std::atomic<int> failures{0};
    parallel_for(nb * ng, threads, [&](int idx) {
        fid[idx] = guarded(failures, [&] {
            LatticeParams p1 = base;
            p1.beta = betas[idx / ng];
            p1.g = gs[idx % ng];
            LatticeParams p2 = p1;
            p2.g += delta_g;
            return fidelity(gibbs_state(p1, space), gibbs_state(p2, space));
        });
    });

    ExperimentOutput out;
    out.table.columns = {"beta", "g", "fidelity"};
    for (int bi = 0; bi < nb; ++bi)
        for (int gi = 0; gi < ng; ++gi)
            out.table.add_row({betas[bi], gs[gi], fid[bi * ng + gi]});
    out.numeric_failures = failures.load();

    const std::vector<CriticalPoint> cps = critical_couplings(base);
    json per_beta = json::array();
    std::vector<double> f_at_gc(nb, kNaN);
    for (int bi = 0; bi < nb; ++bi) {
        int dip = -1;
        for (int gi = 0; gi < ng; ++gi) {
            if (!std::isfinite(fid[bi * ng + gi])) continue;
            if (dip < 0 || fid[bi * ng + gi] < fid[bi * ng + dip]) dip = gi;
        }
        json entry = {{"beta", betas[bi]}};
        if (dip >= 0) {
            entry["dip_g"] = gs[dip];
            entry["dip_fidelity"] = fid[bi * ng + dip];
        }
        if (!cps.empty()) {
            f_at_gc[bi] = guarded(failures, [&] {
                LatticeParams p1 = base;
                p1.beta = betas[bi];
                p1.g = cps.front().g_c;
                LatticeParams p2 = p1;
                p2.g += delta_g;
                return fidelity(gibbs_state(p1, space), gibbs_state(p2, space));
            });
            entry["fidelity_at_gc1"] = f_at_gc[bi];
        }
        per_beta.push_back(entry);
    }
    bool ordering = nb >= 2;
    for (int bi = 0; bi + 1 < nb; ++bi) {
        // deeper dip (smaller F) expected at larger beta
        if (!(betas[bi] < betas[bi + 1]) || !(f_at_gc[bi + 1] < f_at_gc[bi]))
            ordering = false;
    }
    out.summary["per_beta"] = per_beta;
    out.summary["dip_deepens_with_beta"] = ordering;
    out.summary["critical_couplings"] = criticals_json(cps);
    return out;
}

ExperimentOutput run_trace_distance(const RunConfig& cfg, int threads) {
    const LatticeParams base = lattice_from(cfg);
    const std::vector<double> gs = linspace(
        cfg.get_double("g_min"), cfg.get_double("g_max"), cfg.get_int("g_steps"));
    const auto space = StateSpace::build(base.n_sites);

    std::vector<double> dist(gs.size());
    std::atomic<int> failures{0};
    parallel_for(static_cast<int>(gs.size()), threads, [&](int i) {
        dist[i] = guarded(failures, [&] {
            LatticeParams p = base;
            p.g = gs[i];
            return trace_distance(gibbs_state(p, space), factorized_state(p, space));
        });
    });

    ExperimentOutput out;
    out.table.columns = {"g", "trace_distance"};
    for (std::size_t i = 0; i < gs.size(); ++i) out.table.add_row({gs[i], dist[i]});
    out.numeric_failures = failures.load();
    out.summary["jumps"] = finite_jumps_json(gs, dist);
    out.summary["jump_detector"] = detector_json();
    out.summary["critical_couplings"] =
        criticals_json(critical_couplings(base, gs.front(), gs.back()));
    return out;
}

ExperimentOutput run_excitation(const RunConfig& cfg, int threads) {
    const LatticeParams base = lattice_from(cfg);
    const std::vector<double> gs = linspace(
        cfg.get_double("g_min"), cfg.get_double("g_max"), cfg.get_int("g_steps"));

    std::vector<double> exc(gs.size());
    std::atomic<int> failures{0};
    parallel_for(static_cast<int>(gs.size()), threads, [&](int i) {
        exc[i] = guarded(failures, [&] {
            LatticeParams p = base;
            p.g = gs[i];
            return total_excitation(p);
        });
    });
    const GroundEnergyCurve curve = ground_energy(base, gs);

    ExperimentOutput out;
    out.table.columns = {"g", "excitation", "ground_energy", "dEg_dg"};
    for (std::size_t i = 0; i < gs.size(); ++i)
        out.table.add_row({gs[i], exc[i], curve.E_g[i], curve.dEg_dg[i]});
    out.numeric_failures = failures.load();
    out.summary["excitation_jumps"] = finite_jumps_json(gs, exc);
    out.summary["derivative_jumps"] = finite_jumps_json(gs, curve.dEg_dg);
    out.summary["jump_detector"] = detector_json();
    out.summary["critical_couplings"] =
        criticals_json(critical_couplings(base, gs.front(), gs.back()));
    return out;
}

ExperimentOutput run_dynamics(const RunConfig& cfg, int threads) {
    const LatticeParams base = lattice_from(cfg);
    const double t_max = cfg.get_double("t_max");
    const std::vector<double> gs = linspace(
        cfg.get_double("g_min"), cfg.get_double("g_max"), cfg.get_int("g_steps"));

    std::vector<double> maxd(gs.size()), argt(gs.size());
    std::atomic<int> failures{0};
    parallel_for(static_cast<int>(gs.size()), threads, [&](int i) {
        maxd[i] = guarded(failures, [&] {
            LatticeParams p = base;
            p.g = gs[i];
            const TrajectoryResult tr =
                max_trace_distance_trajectory(p, make_time_grid(p, t_max));
            argt[i] = tr.argmax_time;
            return tr.max_distance;
        });
        if (!std::isfinite(maxd[i])) argt[i] = kNaN;
    });

    ExperimentOutput out;
    out.table.columns = {"g", "max_distance", "argmax_time"};
    for (std::size_t i = 0; i < gs.size(); ++i)
        out.table.add_row({gs[i], maxd[i], argt[i]});
    out.numeric_failures = failures.load();
    out.summary["jumps"] = finite_jumps_json(gs, maxd);
    out.summary["jump_detector"] = detector_json();
    out.summary["critical_couplings"] =
        criticals_json(critical_couplings(base, gs.front(), gs.back()));
    out.summary["horizon"] = {{"t_max", t_max}, {"dt_gap_product", 0.05}};
    return out;
}

ExperimentOutput run_scaling(const RunConfig& cfg, int threads) {
    const double omega_f = cfg.get_double("omega_f");
    const double beta = cfg.get_double("beta");
    const std::vector<double> deltas = cfg.get_list("delta_f_list");
    const int size_min = cfg.get_int("size_min");
    const int size_max = cfg.get_int("size_max");

    std::vector<int> sizes;
    for (int n = size_min; n <= size_max; ++n) sizes.push_back(n);
    const int nd = static_cast<int>(deltas.size());
    const int ns = static_cast<int>(sizes.size());

    std::vector<double> gc(static_cast<std::size_t>(nd) * ns, kNaN);
    std::vector<double> deriv(static_cast<std::size_t>(nd) * ns, kNaN);
    std::atomic<int> failures{0};
    parallel_for(nd * ns, threads, [&](int idx) {
        deriv[idx] = guarded(failures, [&] {
            const auto pts = scaling_sweep(omega_f, deltas[idx / ns], beta,
                                           {sizes[idx % ns]});
            gc[idx] = pts.front().g_c;
            return pts.front().derivative;
        });
    });

    ExperimentOutput out;
    out.table.columns = {"delta_f", "n_sites", "g_c", "derivative"};
    for (int di = 0; di < nd; ++di)
        for (int si = 0; si < ns; ++si)
            out.table.add_row({deltas[di], static_cast<double>(sizes[si]),
                               gc[di * ns + si], deriv[di * ns + si]});
    out.numeric_failures = failures.load();

    json fits = json::array();
    for (int di = 0; di < nd; ++di) {
        std::vector<std::pair<double, double>> pts;
        double lo = kNaN, hi = kNaN;
        for (int si = 0; si < ns; ++si) {
            const double v = deriv[di * ns + si];
            if (!std::isfinite(v)) continue;
            pts.emplace_back(sizes[si], v);
            lo = std::isfinite(lo) ? std::min(lo, v) : v;
            hi = std::isfinite(hi) ? std::max(hi, v) : v;
        }
        json entry = {{"delta_f", deltas[di]}, {"points", pts.size()}};
        if (pts.size() >= 4) {
            const ScalingFit fit = fit_exponential(pts);
            entry["A"] = fit.A;
            entry["b"] = fit.b;
            entry["C"] = fit.C;
            entry["rms_residual"] = fit.rms_residual;
            entry["converged"] = fit.converged;
            entry["iterations"] = fit.iterations;
            const double range = hi - lo;
            entry["data_range"] = range;
            if (range > 0.0) entry["rms_over_range"] = fit.rms_residual / range;
        }
        fits.push_back(entry);
    }
    out.summary["fits"] = fits;

    // Pointwise ordering: smaller detuning gives the larger derivative.
    std::vector<int> order(nd);
    for (int i = 0; i < nd; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return deltas[a] < deltas[b]; });
    bool ordering = nd >= 2;
    for (int oi = 0; oi + 1 < nd && ordering; ++oi)
        for (int si = 0; si < ns; ++si) {
            const double lo_d = deriv[order[oi] * ns + si];
            const double hi_d = deriv[order[oi + 1] * ns + si];
            if (!std::isfinite(lo_d) || !std::isfinite(hi_d) || !(lo_d > hi_d)) {
                ordering = false;
                break;
            }
        }
    out.summary["derivative_ordering_by_detuning"] = ordering;
    return out;
}

ExperimentOutput run_meanfield(const RunConfig& cfg, int threads) {
    MeanFieldParams base;
    base.omega_f = cfg.get_double("mf_omega");
    base.omega_a = base.omega_f;  // zero detuning map
    base.g = cfg.get_double("mf_g");
    base.z_coord = cfg.get_int("mf_z");
    base.n_max = cfg.get_int("mf_nmax");
    base.beta = cfg.get_double("mf_beta");
    base.damping = cfg.get_double("mf_damping");
    base.tol = cfg.get_double("mf_tol");
    base.max_iter = cfg.get_int("mf_max_iter");
    base.psi_init = cfg.get_double("mf_psi_init");

    const std::vector<double> hops = linspace(
        cfg.get_double("hop_min"), cfg.get_double("hop_max"), cfg.get_int("hop_steps"));
    const std::vector<double> mus = linspace(
        cfg.get_double("mu_min"), cfg.get_double("mu_max"), cfg.get_int("mu_steps"));

    const auto cells = meanfield_map(base, hops, mus, threads);

    ExperimentOutput out;
    out.table.columns = {"kappa_z_over_g", "mu_minus_omega_over_g",
                         "psi",            "trace_distance",
                         "converged",      "failed"};
    int failed = 0;
    for (const MeanFieldMapPoint& pt : cells) {
        if (pt.failed) ++failed;
        out.table.add_row({pt.axis1, pt.axis2,
                           pt.failed ? kNaN : pt.result.psi,
                           pt.failed ? kNaN : pt.result.trace_distance,
                           pt.result.converged ? 1.0 : 0.0,
                           pt.failed ? 1.0 : 0.0});
    }
    out.numeric_failures = failed;

    const MeanFieldBoundary bd = meanfield_boundary(
        cells, static_cast<int>(hops.size()), static_cast<int>(mus.size()));
    json onset = json::array(), djump = json::array();
    for (std::size_t j = 0; j < mus.size(); ++j) {
        if (bd.psi_onset[j] >= 0)
            onset.push_back({{"mu_axis", mus[j]}, {"hop_axis", hops[bd.psi_onset[j]]}});
        if (bd.d_jump[j] >= 0)
            djump.push_back(
                {{"mu_axis", mus[j]},
                 {"hop_axis", 0.5 * (hops[bd.d_jump[j]] + hops[bd.d_jump[j] + 1])}});
    }
    out.summary["boundary"] = {
        {"psi_onset", onset},
        {"d_jump", djump},
        {"consistent", bd.consistent},
        {"rows_compared", bd.rows_compared},
        {"max_cell_deviation", bd.max_cell_deviation},
        {"psi_threshold", MeanFieldBoundary::kPsiOnsetThreshold},
        {"d_floor", MeanFieldBoundary::kDJumpFloor}};
    return out;
}

ExperimentOutput dispatch(const RunConfig& cfg, int threads) {
    const std::string& e = cfg.experiment();
    if (e == "spectrum") return run_spectrum(cfg, threads);
    if (e == "phase-diagram") return run_phase_diagram(cfg, threads);
    if (e == "fidelity") return run_fidelity(cfg, threads);
    if (e == "trace-distance") return run_trace_distance(cfg, threads);
    if (e == "excitation") return run_excitation(cfg, threads);
    if (e == "dynamics") return run_dynamics(cfg, threads);
    if (e == "scaling") return run_scaling(cfg, threads);
    if (e == "meanfield") return run_meanfield(cfg, threads);
    throw ConfigError("unknown experiment '" + e + "'");
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spill(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
    out << text;
}

}  // namespace

RunResult run_experiment(const RunConfig& cfg, const RunOptions& opts) {
    namespace fs = std::filesystem;
    reset_psd_clip_warnings();

    const fs::path outdir = opts.out_dir.empty() ? fs::path(".") : fs::path(opts.out_dir);
    std::error_code ec;
    fs::create_directories(outdir, ec);
    if (ec)
        throw ConfigError("cannot create output directory '" + outdir.string() +
                          "': " + ec.message());

    const bool use_cache = cfg.has("cache") ? cfg.get_bool("cache") : true;
    char keyhex[20];
    std::snprintf(keyhex, sizeof(keyhex), "%016llx",
                  static_cast<unsigned long long>(cfg.cache_key()));
    const fs::path cachedir = outdir / ".qpt-cache";
    const fs::path cached_body = cachedir / (std::string(keyhex) + ".csv");
    const fs::path cached_summary = cachedir / (std::string(keyhex) + ".summary.json");

    std::string body, summary_text;
    bool hit = false;
    if (use_cache && fs::exists(cached_body) && fs::exists(cached_summary)) {
        body = slurp(cached_body);
        summary_text = slurp(cached_summary);
        hit = true;
    } else {
        ExperimentOutput eo = dispatch(cfg, opts.threads);
        json s = eo.summary;
        s["experiment"] = cfg.experiment();
        s["version"] = kVersion;
        json conf = json::object();
        for (const auto& [k, v] : cfg.values()) conf[k] = v;
        s["config"] = conf;
        s["numeric_failures"] = eo.numeric_failures;
        s["psd_clip_warnings"] = psd_clip_warnings();
        body = csv_body(eo.table);
        summary_text = s.dump(2) + "\n";
        if (use_cache) {
            fs::create_directories(cachedir, ec);
            if (ec)
                throw ConfigError("cannot create cache directory: " + ec.message());
            spill(cached_body, body);
            spill(cached_summary, summary_text);
        }
    }

    RunResult result;
    result.cache_hit = hit;
    result.csv_path = outdir / (cfg.experiment() + ".csv");
    result.summary_path = outdir / (cfg.experiment() + ".summary.json");

    std::ostringstream csv;
    csv << "# experiment = " << cfg.experiment() << "\n";
    csv << "# version = " << kVersion << "\n";
    csv << "# generated = " << timestamp_utc() << "\n";
    csv << "# cache_status = " << (hit ? "hit" : "miss") << "\n";
    for (const auto& [k, v] : cfg.values()) csv << "# " << k << " = " << v << "\n";
    csv << body;
    spill(result.csv_path, csv.str());
    spill(result.summary_path, summary_text);
    return result;
}

}  // namespace qpt
