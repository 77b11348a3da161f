// Command-line front end: picks up a config file (flat key = value), applies
// flag overrides, runs the selected suites and writes artifacts.

#include "qma/experiment.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"Quaternionic Monge-Ampere equation: solver and estimate verifier"};

    std::string config_path;
    std::string mode;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false, mode_set = false, out_set = false;

    app.add_option("--config", config_path, "config file (flat key = value)");
    app.add_option("--mode", mode, "identities | diagonalize | solve | estimates | full")
        ->each([&](const std::string&) { mode_set = true; });
    app.add_option("--seed", seed, "random seed")->each([&](const std::string&) { seed_set = true; });
    app.add_option("--out", out_dir, "output directory")->each([&](const std::string&) {
        out_set = true;
    });

    CLI11_PARSE(app, argc, argv);

    // QMA_THREADS caps internal parallelism; the current kernels are serial,
    // the variable is accepted for forward compatibility.
    [[maybe_unused]] const char* threads = std::getenv("QMA_THREADS");

    try {
        qma::ExperimentConfig cfg =
            config_path.empty() ? qma::default_config() : qma::parse_config_file(config_path);
        if (mode_set) {
            if (mode != "identities" && mode != "diagonalize" && mode != "solve" &&
                mode != "estimates" && mode != "full") {
                std::cerr << "error: unknown mode '" << mode << "'\n";
                return qma::kExitConfigError;
            }
            cfg.mode = mode;
        }
        if (seed_set) cfg.seed = seed;
        if (out_set) cfg.out_dir = out_dir;
        return qma::run(cfg);
    } catch (const qma::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return qma::kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return qma::kExitSolverFailure;
    }
}
