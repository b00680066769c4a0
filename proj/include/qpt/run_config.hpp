// run_config.hpp — flat key=value run configuration with per-experiment
// defaults, file/CLI override layering, validation, and a content hash used
// as the cache key.

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace qpt {

class RunConfig {
  public:
    // Layering: defaults_for(experiment), then the config file (may be
    // empty), then --set overrides in order. Throws ConfigError with a
    // line reference on parse problems or unknown keys.
    static RunConfig load(const std::string& experiment,
                          const std::string& config_path,
                          const std::vector<std::string>& overrides);

    static const std::vector<std::string>& experiment_names();
    static std::map<std::string, std::string> defaults_for(
        const std::string& experiment);

    const std::string& experiment() const { return experiment_; }
    const std::map<std::string, std::string>& values() const { return kv_; }

    bool has(const std::string& key) const;
    double get_double(const std::string& key) const;
    int get_int(const std::string& key) const;
    bool get_bool(const std::string& key) const;
    // Comma-separated list of numbers.
    std::vector<double> get_list(const std::string& key) const;

    // Grid sanity checks (swept axes need ≥ 2 steps, max > min, ...).
    void validate() const;

    // Sorted "key=value" lines with normalized numerics, experiment included;
    // the cache key is the FNV-1a 64-bit hash of this text.
    std::string canonical() const;
    std::uint64_t cache_key() const;

  private:
    std::string experiment_;
    std::map<std::string, std::string> kv_;
};

}  // namespace qpt
