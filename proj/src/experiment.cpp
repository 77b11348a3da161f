#include "qma/experiment.hpp"

#include "qma/field_io.hpp"
#include "qma/simdiag.hpp"
#include "qma/torus_ops.hpp"
#include "qma/two_form.hpp"
#include "qma/wedge_identities.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

namespace qma {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream ss(s);
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void config_fail(const std::string& origin, int line, const std::string& what) {
    throw ConfigError(origin + ":" + std::to_string(line) + ": " + what);
}

HarmonicList parse_harmonics(const std::string& origin, int line, const std::string& value) {
    // semicolon-separated coord:freq:amp:phase with 1-based coordinates
    HarmonicList hs;
    for (const std::string& part : split(value, ';')) {
        const std::string p = trim(part);
        if (p.empty()) continue;
        const std::vector<std::string> f = split(p, ':');
        if (f.size() != 4)
            config_fail(origin, line, "harmonic needs coord:freq:amp:phase, got '" + p + "'");
        try {
            Harmonic h;
            h.coord = std::stoi(trim(f[0])) - 1;
            h.freq = std::stoi(trim(f[1]));
            h.amp = std::stod(trim(f[2]));
            h.phase = std::stod(trim(f[3]));
            if (h.coord < 0) config_fail(origin, line, "harmonic coordinate must be >= 1");
            if (h.freq < 1) config_fail(origin, line, "harmonic frequency must be >= 1");
            hs.push_back(h);
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception&) {
            config_fail(origin, line, "malformed harmonic '" + p + "'");
        }
    }
    if (hs.empty()) config_fail(origin, line, "empty harmonic list");
    return hs;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    os << text;
}

struct SuiteOutcome {
    bool verification_ok = true;
    bool solver_ok = true;
};

void run_identities(const ExperimentConfig& cfg, SuiteOutcome& outcome) {
    nlohmann::ordered_json j;
    bool all = true;
    const int top = std::min(cfg.n, 3);
    for (int n = 1; n <= top; ++n) {
        const WedgeIdentityReport rep = verify_wedge_identities(n);
        nlohmann::ordered_json jn;
        jn["n"] = rep.n;
        jn["all_zero"] = rep.all_zero;
        jn["residuals"] = rep.residual_strings();
        j["identities"].push_back(jn);
        all = all && rep.all_zero;
        std::cout << "identities n=" << n << ": "
                  << (rep.all_zero ? "zero residuals" : "NONZERO residuals") << "\n";
    }
    j["all_zero"] = all;
    write_text_file(cfg.out_dir + "/identities_report.json", j.dump(2) + "\n");
    outcome.verification_ok = outcome.verification_ok && all;
}

void run_diagonalize(const ExperimentConfig& cfg, SuiteOutcome& outcome) {
    std::mt19937_64 rng(cfg.seed);
    nlohmann::ordered_json j;
    bool ok = true;

    double worst_resid = 0.0, worst_conj = 0.0, worst_im = 0.0;
    double worst_re = 0.0;
    for (int n = 1; n <= 4; ++n) {
        const HypercomplexFrame frame = standard_frame(n);
        for (int trial = 0; trial < cfg.diag_trials; ++trial) {
            const TwoFormQ w1 = random_strictly_q_positive(rng, n);
            const bool positive_case = trial % 2 == 1;
            const TwoFormQ w2 =
                positive_case ? random_strictly_q_positive(rng, n, 0.1) : random_q_real(rng, n);
            const DiagonalizationResult d = simultaneous_diagonalize(frame, w1, w2);
            worst_resid = std::max(worst_resid, d.residual);
            const Eigen::VectorXcd v = random_complex_vector(rng, 2 * n);
            worst_conj = std::max(worst_conj, conj_equivariance_residual(frame, w1, w2, v));
            if (positive_case) {
                for (int i = 0; i < n; ++i) {
                    worst_im = std::max(worst_im, std::abs(d.eigenvalues(i).imag()));
                    worst_re = std::min(worst_re, d.eigenvalues(i).real());
                }
            }
        }
    }
    ok = ok && worst_resid <= 1e-10 && worst_conj <= 1e-11 && worst_im <= 1e-9 && worst_re >= -1e-9;
    j["diag_max_residual"] = worst_resid;
    j["conj_equivariance_max"] = worst_conj;
    j["eigen_im_max"] = worst_im;
    j["eigen_re_min"] = worst_re;

    // pointwise coefficient inequality sweep
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    int violations = 0;
    for (int trial = 0; trial < cfg.pointwise_trials; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 4);
        PointwiseCoefficients pc;
        pc.a.resize(2 * n);
        pc.b.resize(2 * n);
        pc.phis.resize(n);
        for (int i = 0; i < 2 * n; ++i) {
            pc.a[i] = Complex(gauss(rng), gauss(rng));
            pc.b[i] = Complex(gauss(rng), gauss(rng));
        }
        double Bmax = 0.0;
        for (const auto& b : pc.b) Bmax = std::max(Bmax, std::abs(b));
        for (int i = 0; i < n; ++i) pc.phis[i] = 3.0 * unif(rng);
        const int k = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
        for (double eps : {0.01, 1.0, 100.0}) {
            const CoefficientBoundSides sides = pointwise_coefficient_bound(pc, k, eps, Bmax);
            if (sides.lhs > sides.rhs) ++violations;
        }
    }
    ok = ok && violations == 0;
    j["pointwise_trials"] = cfg.pointwise_trials;
    j["pointwise_violations"] = violations;
    j["ok"] = ok;
    write_text_file(cfg.out_dir + "/diag_report.json", j.dump(2) + "\n");
    std::cout << "diagonalize: max orthogonality residual " << worst_resid
              << ", coefficient-bound violations "
              << violations << (ok ? " (ok)" : " (FAIL)") << "\n";
    outcome.verification_ok = outcome.verification_ok && ok;
}

void run_solve(const ExperimentConfig& cfg, SuiteOutcome& outcome) {
    const SpectralGrid grid(cfg.n, cfg.active, cfg.N);
    const ScalarField F = build_input_field(cfg, grid);
    const SolveReport rep = cfg.n == 1 ? solve_linear_n1(F, cfg.solve) : solve_qma(F, cfg.solve);
    write_text_file(cfg.out_dir + "/solve_report.json", solve_report_json(rep));
    write_field_file(cfg.out_dir + "/F.qmafld", F);
    write_field_file(cfg.out_dir + "/phi.qmafld", rep.phi);
    write_field_csv_file(cfg.out_dir + "/phi.csv", rep.phi);
    std::cout << "solve: " << rep.message << ", residual " << rep.residual << ", min eigenvalue "
              << rep.min_rel_eigenvalue << " (wall " << rep.wall_seconds << "s)\n";
    outcome.solver_ok = outcome.solver_ok && rep.success;
}

void run_estimates(const ExperimentConfig& cfg, SuiteOutcome& outcome) {
    const SpectralGrid grid(cfg.n, cfg.active, cfg.N);
    const double q = cfg.q > 0.0 ? cfg.q : 4.0 * cfg.n;
    std::vector<ScalarField> family;
    try {
        family = build_family(cfg, grid, q);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("estimates family construction failed: ") + e.what());
    }
    EstimateReport rep;
    try {
        rep = c0_bound_study(family, q, cfg.solve);
    } catch (const std::runtime_error& e) {
        std::cout << "estimates: solver failure: " << e.what() << "\n";
        outcome.solver_ok = false;
        return;
    }
    write_text_file(cfg.out_dir + "/estimate_report.json", estimate_report_json(rep));

    std::ostringstream cherrier_csv;
    cherrier_csv << "instance,p,ratio\n";
    std::ostringstream moser_csv;
    moser_csv << "instance,p,log_norm\n";
    std::ostringstream bounds_csv;
    bounds_csv << "instance,sup_abs_phi,l1_phi,assembled_C,c0_bound_ok\n";
    for (std::size_t i = 0; i < rep.instances.size(); ++i) {
        const InstanceEstimates& ins = rep.instances[i];
        for (std::size_t k = 0; k < ins.cherrier_p.size(); ++k)
            cherrier_csv << i << "," << format_double(ins.cherrier_p[k]) << ","
                         << format_double(ins.cherrier_ratios[k]) << "\n";
        for (std::size_t k = 0; k < ins.moser.p_values.size(); ++k)
            moser_csv << i << "," << format_double(ins.moser.p_values[k]) << ","
                      << format_double(ins.moser.log_norms[k]) << "\n";
        bounds_csv << i << "," << format_double(ins.sup_abs_phi) << ","
                   << format_double(ins.l1_phi) << "," << format_double(rep.assembled_C) << ","
                   << (ins.c0_bound_ok ? 1 : 0) << "\n";
    }
    write_text_file(cfg.out_dir + "/cherrier_ratios.csv", cherrier_csv.str());
    write_text_file(cfg.out_dir + "/moser_norms.csv", moser_csv.str());
    write_text_file(cfg.out_dir + "/bounds.csv", bounds_csv.str());

    // scaled calibration family: one fitted exponent constant across scales
    bool scaling_ok = true;
    try {
        const std::vector<ScalingRow> rows =
            scaling_study(family.front(), rep.constants, cfg.solve);
        std::ostringstream scaling_csv;
        scaling_csv << "s,sup_abs_phi,exp_inf_ok\n";
        for (const ScalingRow& row : rows) {
            scaling_csv << format_double(row.scale) << "," << format_double(row.sup_abs_phi)
                        << "," << (row.exp_inf_ok ? 1 : 0) << "\n";
            scaling_ok = scaling_ok && row.exp_inf_ok;
        }
        write_text_file(cfg.out_dir + "/scaling.csv", scaling_csv.str());
    } catch (const std::runtime_error& e) {
        std::cout << "estimates: scaling study solver failure: " << e.what() << "\n";
        outcome.solver_ok = false;
        return;
    }

    std::cout << "estimates: " << (rep.all_pass && scaling_ok ? "all inequalities pass"
                                                              : "FAILURES present")
              << ", assembled C = " << rep.assembled_C << "\n";
    outcome.verification_ok = outcome.verification_ok && rep.all_pass && scaling_ok;
}

}  // namespace

ExperimentConfig default_config() {
    ExperimentConfig cfg;
    cfg.mode = "full";
    cfg.n = 2;
    cfg.N = 64;
    cfg.active = {0, 4};
    cfg.harmonics = {{0, 1, 0.5, 0.0}, {4, 1, 0.5, 0.0}};
    cfg.q = 8.0;
    return cfg;
}

ExperimentConfig parse_config_text(const std::string& text, const std::string& origin) {
    ExperimentConfig cfg = default_config();
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    bool saw_active = false;
    while (std::getline(is, line)) {
        ++lineno;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) config_fail(origin, lineno, "expected key = value");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        try {
            if (key == "mode") {
                if (value != "identities" && value != "diagonalize" && value != "solve" &&
                    value != "estimates" && value != "full")
                    config_fail(origin, lineno, "unknown mode '" + value + "'");
                cfg.mode = value;
            } else if (key == "n") {
                cfg.n = std::stoi(value);
            } else if (key == "N") {
                cfg.N = std::stoi(value);
            } else if (key == "active") {
                cfg.active.clear();
                for (const std::string& p : split(value, ','))
                    cfg.active.push_back(std::stoi(trim(p)) - 1);
                saw_active = true;
            } else if (key == "q") {
                cfg.q = std::stod(value);
            } else if (key == "seed") {
                cfg.seed = std::stoull(value);
            } else if (key == "out") {
                cfg.out_dir = value;
            } else if (key == "F") {
                cfg.harmonics = parse_harmonics(origin, lineno, value);
                cfg.field_file.clear();
            } else if (key == "F_file") {
                cfg.field_file = value;
                cfg.harmonics.clear();
            } else if (key == "family_size") {
                cfg.family_size = std::stoi(value);
            } else if (key == "target_ef_norm") {
                cfg.target_ef_norm = std::stod(value);
            } else if (key == "diag_trials") {
                cfg.diag_trials = std::stoi(value);
            } else if (key == "pointwise_trials") {
                cfg.pointwise_trials = std::stoi(value);
            } else if (key == "continuity_steps") {
                cfg.solve.continuity_steps = std::stoi(value);
            } else if (key == "newton_tol") {
                cfg.solve.newton_tol = std::stod(value);
            } else if (key == "max_newton_iters") {
                cfg.solve.max_newton_iters = std::stoi(value);
            } else if (key == "damping") {
                cfg.solve.damping = std::stod(value);
            } else if (key == "linear_tol") {
                cfg.solve.linear_tol = std::stod(value);
            } else {
                config_fail(origin, lineno, "unknown key '" + key + "'");
            }
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception&) {
            config_fail(origin, lineno, "malformed value for '" + key + "'");
        }
    }
    if (!saw_active && cfg.n == 1) cfg.active = {0};
    // validation
    if (cfg.n < 1) throw ConfigError(origin + ": n must be >= 1");
    if (cfg.q != 0.0 && (cfg.mode == "estimates" || cfg.mode == "full") && cfg.q <= 2.0 * cfg.n)
        throw ConfigError(origin + ": estimates need q > 2n");
    for (int c : cfg.active)
        if (c < 0 || c >= 4 * cfg.n)
            throw ConfigError(origin + ": active coordinate out of range 1..4n");
    if (cfg.family_size < 2) throw ConfigError(origin + ": family_size must be >= 2");
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse_config_text(ss.str(), path);
}

ScalarField build_input_field(const ExperimentConfig& cfg, const SpectralGrid& grid) {
    if (!cfg.field_file.empty()) {
        ScalarField f = read_field_file(cfg.field_file);
        if (!(f.grid() == grid))
            throw ConfigError("field file grid does not match the configured grid");
        return f;
    }
    for (const auto& h : cfg.harmonics)
        if (grid.axis_of(h.coord) < 0)
            throw ConfigError("harmonic coordinate x" + std::to_string(h.coord + 1) +
                              " is not active on the configured grid");
    return sample_harmonics(grid, cfg.harmonics);
}

std::vector<ScalarField> build_family(const ExperimentConfig& cfg, const SpectralGrid& grid,
                                      double q) {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> amp(0.15, 0.45);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);

    std::vector<ScalarField> family;
    family.push_back(build_input_field(cfg, grid));
    for (int i = 1; i < cfg.family_size; ++i) {
        HarmonicList hs;
        for (int c : grid.active) {
            Harmonic h;
            h.coord = c;
            h.freq = 1 + static_cast<int>(rng() % 2);
            h.amp = amp(rng);
            h.phase = phase(rng);
            hs.push_back(h);
        }
        family.push_back(sample_harmonics(grid, hs));
    }
    const double target =
        cfg.target_ef_norm > 0.0 ? cfg.target_ef_norm : lp_norm(exp_field(family.front()), q);
    for (auto& F : family) normalize_ef_lq(F, q, target);
    return family;
}

int run(const ExperimentConfig& cfg) {
    std::filesystem::create_directories(cfg.out_dir);
    SuiteOutcome outcome;
    try {
        if (cfg.mode == "identities" || cfg.mode == "full") run_identities(cfg, outcome);
        if (cfg.mode == "diagonalize" || cfg.mode == "full") run_diagonalize(cfg, outcome);
        if (cfg.mode == "solve" || cfg.mode == "full") run_solve(cfg, outcome);
        if (cfg.mode == "estimates" || cfg.mode == "full") run_estimates(cfg, outcome);
    } catch (const ConfigError&) {
        throw;
    }
    if (!outcome.solver_ok) return kExitSolverFailure;
    if (!outcome.verification_ok) return kExitVerificationFailure;
    return kExitOk;
}

}  // namespace qma
