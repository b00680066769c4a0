#include "qpt/errors.hpp"
#include "qpt/experiments.hpp"
#include "qpt/run_config.hpp"
#include "qpt/version.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <sstream>

int main(int argc, char** argv) {
    CLI::App app{"Phase-transition sweeps for a finite cavity lattice"};

    std::ostringstream names;
    for (const std::string& n : qpt::RunConfig::experiment_names())
        names << (names.tellp() > 0 ? ", " : "") << n;

    std::string experiment;
    app.add_option("experiment", experiment, "One of: " + names.str())->required();

    std::string config_path;
    app.add_option("--config", config_path, "Config file with key = value lines")
        ->check(CLI::ExistingFile);

    std::vector<std::string> overrides;
    app.add_option("--set", overrides, "Override one key (key=value); repeatable");

    const char* env_out = std::getenv("QPT_OUT_DIR");
    qpt::RunOptions opts;
    if (env_out != nullptr && env_out[0] != '\0') opts.out_dir = env_out;
    app.add_option("--out", opts.out_dir, "Output directory")
        ->capture_default_str();
    app.add_option("--threads", opts.threads, "Worker threads")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    app.set_version_flag("--version", qpt::kVersion);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::CallForVersion&) {
        std::cout << qpt::kVersion << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        qpt::RunConfig cfg = qpt::RunConfig::load(experiment, config_path, overrides);
        cfg.validate();
        const qpt::RunResult res = qpt::run_experiment(cfg, opts);
        std::cout << res.csv_path.string() << "\n"
                  << res.summary_path.string() << "\n";
        return 0;
    } catch (const qpt::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
