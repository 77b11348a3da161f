#pragma once

// Experiment front end shared by the CLI and the acceptance suite: a flat
// key = value config, the four verification suites and the solver runs, and
// deterministic artifact emission (JSON reports, CSV tables, field binaries).

#include "qma/estimates.hpp"
#include "qma/solver.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace qma {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    std::string mode = "full";  // identities | diagonalize | solve | estimates | full
    int n = 2;
    int N = 64;
    std::vector<int> active;  // 0-based; config files use 1-based coordinates
    double q = 0.0;           // 0 = default 4n
    std::uint64_t seed = 42;
    std::string out_dir = "out";
    HarmonicList harmonics;  // F specification...
    std::string field_file;  // ...or a field file path
    int family_size = 6;
    double target_ef_norm = 2.0;  // 0 = match the calibration instance
    int diag_trials = 1000;
    int pointwise_trials = 10000;
    SolveConfig solve;
};

/// Default problem: n = 2, S = {x1, x5}, N = 64, F = 0.5 (cos 2 pi x1 + cos 2 pi x5).
ExperimentConfig default_config();

/// Parses the flat key = value format; errors carry the line number.
ExperimentConfig parse_config_file(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text, const std::string& origin);

// exit codes
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailure = 2;
inline constexpr int kExitSolverFailure = 3;
inline constexpr int kExitConfigError = 4;

/// Runs the configured suites, writes artifacts under out_dir, returns the
/// exit status (verification failures and solver failures are distinct).
int run(const ExperimentConfig& cfg);

/// The F field of a config on a given grid.
ScalarField build_input_field(const ExperimentConfig& cfg, const SpectralGrid& grid);

/// Deterministic estimate family: the configured F is the calibration
/// instance; held-out instances draw random harmonic shapes from the seed and
/// are normalized to the same ||e^F||_{L^q}.
std::vector<ScalarField> build_family(const ExperimentConfig& cfg, const SpectralGrid& grid,
                                      double q);

}  // namespace qma
