#include "qpt/run_config.hpp"

#include "qpt/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace qpt {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

double parse_double(const std::string& key, const std::string& value) {
    const std::string v = trim(value);
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (v.empty() || end != v.c_str() + v.size())
        throw ConfigError("config key '" + key + "': cannot parse number from '" +
                          value + "'");
    return x;
}

std::string normalize_number(const std::string& value) {
    const std::string v = trim(value);
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (v.empty() || end != v.c_str() + v.size()) return v;  // not numeric
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

const std::map<std::string, std::string> kCommonLattice = {
    {"n_sites", "5"}, {"omega_f", "3"}, {"delta_f", "0"},
    {"kappa", "1"},   {"cache", "true"},
};

std::map<std::string, std::string> with_common(
    std::map<std::string, std::string> extra) {
    auto m = kCommonLattice;
    for (auto& [k, v] : extra) m[k] = v;
    return m;
}

}  // namespace

const std::vector<std::string>& RunConfig::experiment_names() {
    static const std::vector<std::string> names = {
        "spectrum",   "phase-diagram", "fidelity", "trace-distance",
        "excitation", "dynamics",      "scaling",  "meanfield"};
    return names;
}

std::map<std::string, std::string> RunConfig::defaults_for(
    const std::string& experiment) {
    if (experiment == "spectrum")
        return with_common({{"g_min", "0"}, {"g_max", "4"}, {"g_steps", "801"}});
    if (experiment == "phase-diagram")
        return with_common({{"beta", "800"},
                            {"g_min", "0"},
                            {"g_max", "4"},
                            {"g_steps", "161"},
                            {"delta_min", "-2"},
                            {"delta_max", "6"},
                            {"delta_steps", "81"}});
    if (experiment == "fidelity")
        return with_common({{"beta_list", "20,40,60"},
                            {"delta_g", "0.01"},
                            {"g_min", "0.5"},
                            {"g_max", "2.9"},
                            {"g_steps", "241"}});
    if (experiment == "trace-distance")
        return with_common({{"beta", "800"},
                            {"g_min", "0.5"},
                            {"g_max", "2.9"},
                            {"g_steps", "481"}});
    if (experiment == "excitation")
        return with_common({{"beta", "800"},
                            {"g_min", "0.5"},
                            {"g_max", "2.9"},
                            {"g_steps", "481"}});
    if (experiment == "dynamics")
        return with_common({{"beta", "300"},
                            {"g_min", "0.5"},
                            {"g_max", "2.9"},
                            {"g_steps", "201"},
                            {"t_max", "200"}});
    if (experiment == "scaling")
        return {{"omega_f", "3"},      {"beta", "300"},   {"delta_f_list", "0,3,5"},
                {"size_min", "1"},     {"size_max", "100"}, {"cache", "true"}};
    if (experiment == "meanfield")
        return {{"mf_g", "1"},         {"mf_omega", "3"},    {"mf_z", "2"},
                {"mf_nmax", "15"},     {"mf_beta", "100"},   {"mf_damping", "0.5"},
                {"mf_tol", "1e-10"},   {"mf_max_iter", "10000"},
                {"mf_psi_init", "0.1"},
                {"hop_min", "0.01"},   {"hop_max", "0.25"},  {"hop_steps", "21"},
                {"mu_min", "-1.1"},    {"mu_max", "-0.5"},   {"mu_steps", "21"},
                {"cache", "true"}};
    throw ConfigError("unknown experiment '" + experiment + "' (expected one of: " +
                      [] {
                          std::string all;
                          for (const auto& n : experiment_names())
                              all += (all.empty() ? "" : ", ") + n;
                          return all;
                      }() +
                      ")");
}

RunConfig RunConfig::load(const std::string& experiment,
                          const std::string& config_path,
                          const std::vector<std::string>& overrides) {
    RunConfig cfg;
    cfg.experiment_ = experiment;
    cfg.kv_ = defaults_for(experiment);

    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw ConfigError("cannot open config file '" + config_path + "'");
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const std::size_t hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            line = trim(line);
            if (line.empty()) continue;
            const std::size_t eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError(config_path + ":" + std::to_string(lineno) +
                                  ": expected key=value");
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (cfg.kv_.find(key) == cfg.kv_.end())
                throw ConfigError(config_path + ":" + std::to_string(lineno) +
                                  ": unknown key '" + key + "' for experiment '" +
                                  experiment + "'");
            cfg.kv_[key] = value;
        }
    }

    for (const std::string& ov : overrides) {
        const std::size_t eq = ov.find('=');
        if (eq == std::string::npos)
            throw ConfigError("--set expects key=value, got '" + ov + "'");
        const std::string key = trim(ov.substr(0, eq));
        const std::string value = trim(ov.substr(eq + 1));
        if (cfg.kv_.find(key) == cfg.kv_.end())
            throw ConfigError("--set: unknown key '" + key + "' for experiment '" +
                              experiment + "'");
        cfg.kv_[key] = value;
    }

    cfg.validate();
    return cfg;
}

bool RunConfig::has(const std::string& key) const {
    return kv_.find(key) != kv_.end();
}

double RunConfig::get_double(const std::string& key) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) throw ConfigError("missing config key '" + key + "'");
    return parse_double(key, it->second);
}

int RunConfig::get_int(const std::string& key) const {
    const double x = get_double(key);
    const int i = static_cast<int>(x);
    if (static_cast<double>(i) != x)
        throw ConfigError("config key '" + key + "' must be an integer");
    return i;
}

bool RunConfig::get_bool(const std::string& key) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) throw ConfigError("missing config key '" + key + "'");
    std::string v = trim(it->second);
    std::transform(v.begin(), v.end(), v.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("config key '" + key + "' must be a boolean");
}

std::vector<double> RunConfig::get_list(const std::string& key) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) throw ConfigError("missing config key '" + key + "'");
    std::vector<double> out;
    std::stringstream ss(it->second);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double(key, item));
    if (out.empty()) throw ConfigError("config key '" + key + "' is an empty list");
    return out;
}

void RunConfig::validate() const {
    const auto check_axis = [&](const std::string& stem) {
        if (!has(stem + "_steps")) return;
        const int steps = get_int(stem + "_steps");
        if (steps < 2)
            throw ConfigError("config key '" + stem + "_steps' must be >= 2");
        if (!(get_double(stem + "_max") > get_double(stem + "_min")))
            throw ConfigError("config: " + stem + "_max must exceed " + stem +
                              "_min");
    };
    check_axis("g");
    check_axis("delta");
    check_axis("hop");
    check_axis("mu");

    if (has("n_sites") && get_int("n_sites") < 1)
        throw ConfigError("config key 'n_sites' must be >= 1");
    if (has("kappa") && !(get_double("kappa") > 0.0))
        throw ConfigError("config key 'kappa' must be > 0");
    if (has("beta") && !(get_double("beta") > 0.0))
        throw ConfigError("config key 'beta' must be > 0");
    if (has("beta_list"))
        for (double b : get_list("beta_list"))
            if (!(b > 0.0)) throw ConfigError("beta_list entries must be > 0");
    if (has("delta_g") && !(get_double("delta_g") > 0.0))
        throw ConfigError("config key 'delta_g' must be > 0");
    if (has("t_max") && !(get_double("t_max") > 0.0))
        throw ConfigError("config key 't_max' must be > 0");
    if (has("size_min")) {
        const int lo = get_int("size_min");
        const int hi = get_int("size_max");
        if (lo < 1) throw ConfigError("config key 'size_min' must be >= 1");
        if (hi - lo + 1 < 4)
            throw ConfigError("config: size range must contain at least 4 sizes");
    }
    if (has("mf_nmax") && get_int("mf_nmax") < 10)
        throw ConfigError("config key 'mf_nmax' must be >= 10");
    if (has("mf_damping")) {
        const double d = get_double("mf_damping");
        if (!(d > 0.0) || d > 1.0)
            throw ConfigError("config key 'mf_damping' must be in (0, 1]");
    }
    if (has("mf_tol") && !(get_double("mf_tol") > 0.0))
        throw ConfigError("config key 'mf_tol' must be > 0");
    if (has("mf_max_iter") && get_int("mf_max_iter") < 1)
        throw ConfigError("config key 'mf_max_iter' must be >= 1");
    if (has("mf_z") && get_int("mf_z") < 1)
        throw ConfigError("config key 'mf_z' must be >= 1");
    if (has("mf_g") && !(get_double("mf_g") > 0.0))
        throw ConfigError("config key 'mf_g' must be > 0");
    if (has("cache")) get_bool("cache");
}

std::string RunConfig::canonical() const {
    std::string text = "experiment=" + experiment_ + "\n";
    for (const auto& [k, v] : kv_) {  // std::map iterates sorted
        std::string norm;
        std::stringstream ss(v);
        std::string item;
        bool first = true;
        while (std::getline(ss, item, ',')) {
            norm += (first ? "" : ",") + normalize_number(item);
            first = false;
        }
        text += k + "=" + norm + "\n";
    }
    return text;
}

std::uint64_t RunConfig::cache_key() const {
    const std::string text = canonical();
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace qpt
