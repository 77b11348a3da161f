#pragma once

// Numerical instantiation of the C^0-estimate chain on solved instances: the
// integration-by-parts identity, the Cherrier-type gradient bound, the
// inductive level bounds, the Moser iteration of L^p norms, the sublevel
// measure bound and the final sup bound assembly.  Constants are fitted on a
// calibration instance (max ratio times a fixed safety factor) and asserted
// on held-out instances of the same ||e^F||_{L^q} class.
//
// Every e^{-p phi} integral is evaluated after the shift psi = phi - inf phi
// (the common factor e^{-p inf phi} cancels in each ratio), so the whole
// chain is overflow-free for arbitrary p.

#include "qma/grid.hpp"
#include "qma/solver.hpp"
#include "qma/torus_ops.hpp"

#include <string>
#include <vector>

namespace qma {

struct Harmonic {
    int coord = 0;  // 0-based real coordinate
    int freq = 1;
    double amp = 0.0;
    double phase = 0.0;
};
using HarmonicList = std::vector<Harmonic>;

/// F(x) = sum of amp * cos(2 pi freq x_c + phase).
ScalarField sample_harmonics(const SpectralGrid& grid, const HarmonicList& hs);

/// Additive shift making ||e^F||_{L^q} equal target (returns the shift).
double normalize_ef_lq(ScalarField& F, double q, double target);

/// Per-instance precomputation shared by all estimate checks.
struct EstimateInstance {
    ScalarField phi;
    ScalarField F;
    double A = 1.0;
    double inf_phi = 0.0;
    double sup_phi = 0.0;
    double l1_phi = 0.0;
    std::vector<double> psi;  // phi - inf phi >= 0
    WedgeProfiles profiles;   // rho_k, grad_k per point
    double volume = 0.0;
};
EstimateInstance make_instance(const ScalarField& F, const ScalarField& phi, double A);

/// mean(e^{-p psi} X) * vol; the shifted integral Int e^{-p phi} X dVol
/// divided by e^{-p inf phi}.
double shifted_integral(const EstimateInstance& ins, double p, const std::vector<double>& X);
double shifted_integral(const EstimateInstance& ins, double p);  // X = 1

/// Direct Int e^{-p phi} X dVol without the shift (small p only; used by the
/// shift-invariance check).
double direct_integral(const EstimateInstance& ins, double p, const std::vector<double>& X);

/// Relative defect between Int e^{-p phi}(Omega_phi^n - Omega^n) ^ Omegabar^n
/// and p Int e^{-p phi} dphi ^ dJ phi ^ alpha ^ Omegabar^n, with
/// alpha = sum_k Omega_phi^k ^ Omega^{n-1-k} (the torsion term vanishes on
/// the flat torus).
double stokes_chain_residual(const EstimateInstance& ins, double p);

/// LHS / (p ||e^{-phi}||^p_{L^{pr}}) of the Cherrier inequality, r = q/(q-1),
/// with the common e^{-p inf phi} factor cancelled.
double cherrier_ratio(const EstimateInstance& ins, double p, double q);

struct LevelBoundSides {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};
/// Level-i sides: (p/2^i) Int e^{-p phi} dphi ^ dJphi ^ alpha ^ Omegabar^n vs
/// C_i ||e^{-phi}||^p_{L^{pr}} + eps C_i sum_{k=1}^{n-i} Int e^{-p phi}
/// Omega_phi^k ^ Omega^{n-k} ^ Omegabar^n (both sides shifted).
LevelBoundSides level_bound_tracker(const EstimateInstance& ins, double p, double eps,
                                    int level, double Ci, double q);

/// eps_1 = 1, eps_{i+1} = min{ 1/(C_i 2^{i+2}), eps_i, 1 }.
std::vector<double> level_eps_schedule(const std::vector<double>& level_C);

struct MoserRun {
    std::vector<double> p_values;
    std::vector<double> log_norms;  // log ||e^{-phi}||_{L^{p_k r}}
    bool recursion_ok = false;      // every step passed with the supplied constant
    double final_lhs_log = 0.0;     // log sup e^{-phi}
    double final_rhs_log = 0.0;     // log( C ||e^{-phi}||_{L^{p0 r}} )
    bool final_ok = false;
};
MoserRun moser_iterate(const EstimateInstance& ins, double p0, double q, double log_recursion_C,
                       double final_C, double p_cap = 1024.0, double stall_tol = 1e-6);

/// Per-p Sobolev defect: (Int e^{-p gamma phi})^{1/gamma} vs
/// C ( |d e^{-p phi/2}|^2 energy + Int e^{-p phi} ), shifted; returns the
/// ratio lhs/rhs-inner so that C >= ratio certifies the inequality.
double sobolev_ratio(const EstimateInstance& ins, double p);

struct ExpInfBoundSides {
    double log_lhs = 0.0;  // -s0 inf phi
    double log_rhs = 0.0;  // C + log Int e^{-s0 phi}
    bool holds = false;
};
ExpInfBoundSides exp_inf_bound_check(const EstimateInstance& ins, double s0, double C);

/// Volume of the sublevel set { phi <= inf phi + C1 }.
double sublevel_measure(const EstimateInstance& ins, double C1);

struct FittedConstants {
    double q = 0.0;
    double p0 = 4.0;             // Cherrier sweep start
    double cherrier_C = 0.0;
    double sobolev_C = 0.0;
    double log_moser_C = 0.0;    // recursion constant in log scale
    double moser_final_C = 0.0;
    double moser_p0 = 2.0;
    double exp_bound_C = 0.0;       // exponent constant
    double s0 = 0.0;
    double C1 = 0.0, C2 = 0.0, C3 = 0.0;
    std::vector<double> level_C;    // levels i = 1..n
    std::vector<double> level_eps;  // schedule
};

/// Calibration fit: max measured ratio per inequality times kFitSafety.
inline constexpr double kFitSafety = 2.0;
FittedConstants fit_constants(const EstimateInstance& calib, double q,
                              const std::vector<double>& p_sweep);

struct InstanceEstimates {
    std::vector<double> cherrier_p;
    std::vector<double> cherrier_ratios;
    bool cherrier_ok = false;
    bool sobolev_ok = false;
    std::vector<LevelBoundSides> level_bounds;  // levels 1..n at the worst sweep point
    bool level_ok = false;
    MoserRun moser;
    ExpInfBoundSides exp_inf;
    double sublevel_found = 0.0;
    bool sublevel_ok = false;
    double stokes_max_residual = 0.0;
    bool stokes_ok = false;
    double l1_phi = 0.0;
    bool l1_ok = false;
    double sup_abs_phi = 0.0;
    bool c0_bound_ok = false;  // -inf phi <= C3/C2 + C1
    bool all_ok = false;
};
InstanceEstimates check_instance(const EstimateInstance& ins, const FittedConstants& fc,
                                 const std::vector<double>& p_sweep,
                                 const std::vector<double>& stokes_p);

struct EstimateReport {
    FittedConstants constants;
    std::vector<InstanceEstimates> instances;  // index 0 = calibration
    double assembled_C = 0.0;                  // C3/C2 + C1
    bool all_pass = false;
};

/// Solves every F in the family, fits constants on the first instance and
/// validates everything on the rest.
EstimateReport c0_bound_study(const std::vector<ScalarField>& family, double q,
                              const SolveConfig& cfg = {},
                              const std::vector<double>& p_sweep = {4, 8, 16, 32, 64},
                              const std::vector<double>& stokes_p = {2, 8, 20});

/// Scaled family F_s = s F0: re-solves each scale and checks the sup bound of
/// the fitted exponent constant across scales.
struct ScalingRow {
    double scale = 1.0;
    double sup_abs_phi = 0.0;
    bool exp_inf_ok = false;
};
std::vector<ScalingRow> scaling_study(const ScalarField& F0, const FittedConstants& fc,
                                      const SolveConfig& cfg = {},
                                      const std::vector<double>& scales = {0.5, 1.0, 2.0});

std::string estimate_report_json(const EstimateReport& rep);

/// Constants compared across grid refinement (natural multiplicative scale).
std::vector<std::pair<std::string, double>> reported_constants(const FittedConstants& fc);

}  // namespace qma
