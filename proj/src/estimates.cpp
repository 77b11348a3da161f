#include "qma/estimates.hpp"

#include "qma/field_io.hpp"
#include "qma/wedge_identities.hpp"

#include <json.hpp>

#include <cmath>
#include <stdexcept>

namespace qma {

namespace {

double holder_conjugate(double q) { return q / (q - 1.0); }

double gamma_exponent(int n) { return 2.0 * n / (2.0 * n - 1.0); }

std::vector<double> alpha_profile(const EstimateInstance& ins) {
    // alpha = sum_{k=0}^{n-1} Omega_phi^k ^ Omega^{n-1-k} paired with the
    // gradient 2-form: per point sum over grad_k.
    const std::size_t npts = ins.psi.size();
    std::vector<double> total(npts, 0.0);
    for (const auto& level : ins.profiles.grad)
        for (std::size_t p = 0; p < npts; ++p) total[p] += level[p];
    return total;
}

}  // namespace

ScalarField sample_harmonics(const SpectralGrid& grid, const HarmonicList& hs) {
    return ScalarField::sample(grid, [&](const std::vector<double>& x) {
        double v = 0.0;
        for (const auto& h : hs) v += h.amp * std::cos(2.0 * M_PI * h.freq * x[h.coord] + h.phase);
        return v;
    });
}

double normalize_ef_lq(ScalarField& F, double q, double target) {
    const double current = lp_norm(exp_field(F), q);
    const double shift = std::log(target / current);
    F = F.shifted(shift);
    return shift;
}

EstimateInstance make_instance(const ScalarField& F, const ScalarField& phi, double A) {
    EstimateInstance ins;
    ins.phi = phi;
    ins.F = F;
    ins.A = A;
    ins.inf_phi = phi.min();
    ins.sup_phi = phi.max();
    ScalarField abs_phi = phi;
    for (std::size_t i = 0; i < abs_phi.size(); ++i) abs_phi[i] = std::abs(phi[i]);
    ins.l1_phi = integrate(abs_phi);
    ins.psi.resize(phi.size());
    for (std::size_t i = 0; i < phi.size(); ++i) ins.psi[i] = phi[i] - ins.inf_phi;
    ins.profiles = wedge_profiles(phi);
    ins.volume = volume_scale(phi.grid().n);
    return ins;
}

double shifted_integral(const EstimateInstance& ins, double p, const std::vector<double>& X) {
    double acc = 0.0;
    for (std::size_t i = 0; i < ins.psi.size(); ++i) acc += std::exp(-p * ins.psi[i]) * X[i];
    return acc / static_cast<double>(ins.psi.size()) * ins.volume;
}

double shifted_integral(const EstimateInstance& ins, double p) {
    double acc = 0.0;
    for (double v : ins.psi) acc += std::exp(-p * v);
    return acc / static_cast<double>(ins.psi.size()) * ins.volume;
}

double direct_integral(const EstimateInstance& ins, double p, const std::vector<double>& X) {
    double acc = 0.0;
    for (std::size_t i = 0; i < ins.psi.size(); ++i)
        acc += std::exp(-p * ins.phi[i]) * X[i];
    return acc / static_cast<double>(ins.psi.size()) * ins.volume;
}

double stokes_chain_residual(const EstimateInstance& ins, double p) {
    if (!(p > 0.0)) throw std::invalid_argument("stokes_chain_residual: p > 0 required");
    const std::size_t npts = ins.psi.size();
    std::vector<double> density_minus_one(npts);
    for (std::size_t i = 0; i < npts; ++i)
        density_minus_one[i] = ins.profiles.rho.back()[i] - 1.0;  // rho_n = density
    const double lhs = shifted_integral(ins, p, density_minus_one);
    const double rhs = p * shifted_integral(ins, p, alpha_profile(ins));
    const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
    return std::abs(lhs - rhs) / scale;
}

double cherrier_ratio(const EstimateInstance& ins, double p, double q) {
    if (!(q > 2.0 * ins.phi.grid().n))
        throw std::invalid_argument("cherrier_ratio: q > 2n required");
    const double r = holder_conjugate(q);
    // Both sides carry the common factor e^{-p inf phi}, so the energy is
    // evaluated on u = e^{-p psi / 2} and the norm on the shifted integral.
    ScalarField u(ins.phi.grid(), 0.0);
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = std::exp(-0.5 * p * ins.psi[i]);
    const double grad_term = gradient_energy(u);
    const double norm_term = std::pow(shifted_integral(ins, p * r), 1.0 / r);
    return grad_term / (p * norm_term);
}

LevelBoundSides level_bound_tracker(const EstimateInstance& ins, double p, double eps,
                                    int level, double Ci, double q) {
    const int n = ins.phi.grid().n;
    if (level < 1 || level > n) throw std::invalid_argument("level_bound_tracker: level out of range");
    const double r = holder_conjugate(q);
    LevelBoundSides sides;
    const double pow2 = std::pow(2.0, level);
    sides.lhs = (p / pow2) * shifted_integral(ins, p, alpha_profile(ins));
    double tail = 0.0;
    for (int k = 1; k <= n - level; ++k) tail += shifted_integral(ins, p, ins.profiles.rho[k]);
    sides.rhs = Ci * std::pow(shifted_integral(ins, p * r), 1.0 / r) + eps * Ci * tail;
    sides.holds = sides.lhs <= sides.rhs;
    return sides;
}

std::vector<double> level_eps_schedule(const std::vector<double>& level_C) {
    std::vector<double> eps;
    double current = 1.0;
    for (std::size_t i = 0; i < level_C.size(); ++i) {
        if (i > 0) {
            const double bound = 1.0 / (level_C[i - 1] * std::pow(2.0, static_cast<double>(i) + 2.0));
            current = std::min({bound, current, 1.0});
        }
        eps.push_back(current);
    }
    return eps;
}

double sobolev_ratio(const EstimateInstance& ins, double p) {
    const int n = ins.phi.grid().n;
    const double gamma = gamma_exponent(n);
    const double lhs = std::pow(shifted_integral(ins, p * gamma), 1.0 / gamma);
    const double grad_term = n * (p * p / 4.0) * shifted_integral(ins, p, ins.profiles.grad[0]);
    const double rhs_inner = grad_term + shifted_integral(ins, p);
    // lhs carries e^{-p inf phi / gamma}... both sides must share the same
    // shift factor: lhs scales by e^{-p inf phi} as well since
    // (e^{-p gamma inf})^{1/gamma} = e^{-p inf}.
    return lhs / rhs_inner;
}

MoserRun moser_iterate(const EstimateInstance& ins, double p0, double q, double log_recursion_C,
                       double final_C, double p_cap, double stall_tol) {
    const int n = ins.phi.grid().n;
    if (!(q > 2.0 * n)) throw std::invalid_argument("moser_iterate: q > 2n required");
    const double gamma = gamma_exponent(n);
    const double r = holder_conjugate(q);
    if (!(r < gamma)) throw std::invalid_argument("moser_iterate: needs r < gamma, i.e. q > 2n");

    MoserRun run;
    run.recursion_ok = true;
    double p = p0;
    double prev_log_norm = 0.0;
    bool have_prev = false;
    while (p <= p_cap) {
        // log || e^{-phi} ||_{L^{p r}} with the shift factored out:
        //   -inf phi + (1/(p r)) log Int e^{-p r psi}
        const double log_norm_pr =
            -ins.inf_phi + std::log(shifted_integral(ins, p * r)) / (p * r);
        const double log_norm_pgamma =
            -ins.inf_phi + std::log(shifted_integral(ins, p * gamma)) / (p * gamma);
        run.p_values.push_back(p);
        run.log_norms.push_back(log_norm_pr);
        // || e^{-phi} ||_{L^{p gamma}} <= (p C)^{1/p} || e^{-phi} ||_{L^{p r}}
        const double allowance = (std::log(p) + log_recursion_C) / p;
        if (log_norm_pgamma > log_norm_pr + allowance + 1e-12) run.recursion_ok = false;
        if (have_prev && std::abs(log_norm_pr - prev_log_norm) < stall_tol) break;
        prev_log_norm = log_norm_pr;
        have_prev = true;
        p *= gamma / r;
    }
    run.final_lhs_log = -ins.inf_phi;  // log sup e^{-phi}
    run.final_rhs_log = std::log(final_C) - ins.inf_phi +
                        std::log(shifted_integral(ins, p0 * r)) / (p0 * r);
    run.final_ok = run.final_lhs_log <= run.final_rhs_log + 1e-12;
    return run;
}

ExpInfBoundSides exp_inf_bound_check(const EstimateInstance& ins, double s0, double C) {
    ExpInfBoundSides sides;
    sides.log_lhs = -s0 * ins.inf_phi;
    sides.log_rhs = C + (-s0 * ins.inf_phi) + std::log(shifted_integral(ins, s0));
    sides.holds = sides.log_lhs <= sides.log_rhs + 1e-12;
    return sides;
}

double sublevel_measure(const EstimateInstance& ins, double C1) {
    if (!(C1 > 0.0)) throw std::invalid_argument("sublevel_measure: C1 > 0 required");
    std::size_t count = 0;
    for (double v : ins.psi)
        if (v <= C1) ++count;
    return static_cast<double>(count) / static_cast<double>(ins.psi.size()) * ins.volume;
}

FittedConstants fit_constants(const EstimateInstance& calib, double q,
                              const std::vector<double>& p_sweep) {
    const int n = calib.phi.grid().n;
    FittedConstants fc;
    fc.q = q;
    fc.p0 = p_sweep.front();
    const double r = holder_conjugate(q);

    double worst = 0.0;
    for (double p : p_sweep) worst = std::max(worst, cherrier_ratio(calib, p, q));
    fc.cherrier_C = kFitSafety * std::max(worst, 1e-12);

    worst = 0.0;
    for (double p : p_sweep) worst = std::max(worst, sobolev_ratio(calib, p));
    fc.sobolev_C = kFitSafety * std::max(worst, 1e-12);

    // level bounds, fitted with the eps schedule built as the levels resolve
    fc.level_C.clear();
    double eps_current = 1.0;
    for (int level = 1; level <= n; ++level) {
        if (level > 1) {
            const double bound =
                1.0 / (fc.level_C[level - 2] * std::pow(2.0, static_cast<double>(level) + 1.0));
            eps_current = std::min({bound, eps_current, 1.0});
        }
        double need = 0.0;
        for (double p : p_sweep) {
            const double lhs = (p / std::pow(2.0, level)) *
                               shifted_integral(calib, p, alpha_profile(calib));
            double tail = 0.0;
            for (int k = 1; k <= n - level; ++k)
                tail += shifted_integral(calib, p, calib.profiles.rho[k]);
            const double denom =
                std::pow(shifted_integral(calib, p * r), 1.0 / r) + eps_current * tail;
            need = std::max(need, lhs / denom);
        }
        fc.level_C.push_back(kFitSafety * std::max(need, 1e-12));
    }
    fc.level_eps = level_eps_schedule(fc.level_C);

    // Moser recursion and final constants on the calibration run.
    const double gamma = gamma_exponent(n);
    fc.moser_p0 = 2.0;
    double log_need = -1e300;
    double p = fc.moser_p0;
    while (p <= 1024.0) {
        const double log_norm_pr = std::log(shifted_integral(calib, p * r)) / (p * r);
        const double log_norm_pg = std::log(shifted_integral(calib, p * gamma)) / (p * gamma);
        log_need = std::max(log_need, p * (log_norm_pg - log_norm_pr) - std::log(p));
        p *= gamma / r;
    }
    fc.log_moser_C = log_need + std::log(kFitSafety);

    const double log_final_ratio =
        -std::log(shifted_integral(calib, fc.moser_p0 * r)) / (fc.moser_p0 * r);
    fc.moser_final_C = kFitSafety * std::exp(log_final_ratio);

    fc.s0 = fc.moser_p0 * r;
    const double defect = -std::log(shifted_integral(calib, fc.s0));
    fc.exp_bound_C = std::max(0.0, defect) + std::log(kFitSafety);

    fc.C1 = (fc.exp_bound_C + std::log(2.0 * calib.volume)) / fc.s0;
    fc.C2 = std::exp(-fc.exp_bound_C) / 2.0;
    fc.C3 = kFitSafety * std::max(calib.l1_phi, 1e-12);
    return fc;
}

InstanceEstimates check_instance(const EstimateInstance& ins, const FittedConstants& fc,
                                 const std::vector<double>& p_sweep,
                                 const std::vector<double>& stokes_p) {
    const int n = ins.phi.grid().n;
    InstanceEstimates out;

    out.cherrier_ok = true;
    for (double p : p_sweep) {
        const double ratio = cherrier_ratio(ins, p, fc.q);
        out.cherrier_p.push_back(p);
        out.cherrier_ratios.push_back(ratio);
        if (ratio > fc.cherrier_C) out.cherrier_ok = false;
    }

    out.sobolev_ok = true;
    for (double p : p_sweep)
        if (sobolev_ratio(ins, p) > fc.sobolev_C) out.sobolev_ok = false;

    out.level_ok = true;
    for (int level = 1; level <= n; ++level) {
        LevelBoundSides worst;
        worst.holds = true;
        double closest = 1e300;
        for (double p : p_sweep) {
            const LevelBoundSides sides = level_bound_tracker(
                ins, p, fc.level_eps[level - 1], level, fc.level_C[level - 1], fc.q);
            if (!sides.holds) out.level_ok = false;
            const double margin = sides.rhs - sides.lhs;
            if (margin < closest) {
                closest = margin;
                worst = sides;
            }
        }
        out.level_bounds.push_back(worst);
    }

    out.moser = moser_iterate(ins, fc.moser_p0, fc.q, fc.log_moser_C, fc.moser_final_C);

    out.exp_inf = exp_inf_bound_check(ins, fc.s0, fc.exp_bound_C);
    out.sublevel_found = sublevel_measure(ins, fc.C1);
    out.sublevel_ok = out.sublevel_found >= fc.C2;

    out.stokes_ok = true;
    for (double p : stokes_p) {
        const double resid = stokes_chain_residual(ins, p);
        out.stokes_max_residual = std::max(out.stokes_max_residual, resid);
        if (resid > 1e-7) out.stokes_ok = false;
    }

    out.l1_phi = ins.l1_phi;
    out.l1_ok = ins.l1_phi <= fc.C3;
    out.sup_abs_phi = std::max(std::abs(ins.inf_phi), std::abs(ins.sup_phi));
    const double assembled = fc.C3 / fc.C2 + fc.C1;
    out.c0_bound_ok = -ins.inf_phi <= assembled;

    out.all_ok = out.cherrier_ok && out.sobolev_ok && out.level_ok && out.moser.recursion_ok &&
                 out.moser.final_ok && out.exp_inf.holds && out.sublevel_ok && out.stokes_ok &&
                 out.l1_ok && out.c0_bound_ok;
    return out;
}

EstimateReport c0_bound_study(const std::vector<ScalarField>& family, double q,
                              const SolveConfig& cfg, const std::vector<double>& p_sweep,
                              const std::vector<double>& stokes_p) {
    if (family.empty()) throw std::invalid_argument("c0_bound_study: empty family");
    const int n = family.front().grid().n;
    if (!(q > 2.0 * n)) throw std::invalid_argument("c0_bound_study: q > 2n required");

    std::vector<EstimateInstance> instances;
    for (const auto& F : family) {
        const SolveReport solved = n == 1 ? solve_linear_n1(F, cfg) : solve_qma(F, cfg);
        if (!solved.success)
            throw std::runtime_error("c0_bound_study: solver failed: " + solved.message);
        instances.push_back(make_instance(F, solved.phi, solved.A));
    }

    EstimateReport rep;
    rep.constants = fit_constants(instances.front(), q, p_sweep);
    rep.assembled_C = rep.constants.C3 / rep.constants.C2 + rep.constants.C1;
    rep.all_pass = true;
    for (const auto& ins : instances) {
        rep.instances.push_back(check_instance(ins, rep.constants, p_sweep, stokes_p));
        rep.all_pass = rep.all_pass && rep.instances.back().all_ok;
    }
    return rep;
}

std::vector<ScalingRow> scaling_study(const ScalarField& F0, const FittedConstants& fc,
                                      const SolveConfig& cfg,
                                      const std::vector<double>& scales) {
    std::vector<ScalingRow> rows;
    for (double s : scales) {
        const ScalarField Fs = s * F0;
        const SolveReport solved =
            F0.grid().n == 1 ? solve_linear_n1(Fs, cfg) : solve_qma(Fs, cfg);
        if (!solved.success)
            throw std::runtime_error("scaling_study: solver failed at scale " +
                                     std::to_string(s));
        const EstimateInstance ins = make_instance(Fs, solved.phi, solved.A);
        ScalingRow row;
        row.scale = s;
        row.sup_abs_phi = std::max(std::abs(ins.inf_phi), std::abs(ins.sup_phi));
        row.exp_inf_ok = exp_inf_bound_check(ins, fc.s0, fc.exp_bound_C).holds;
        rows.push_back(row);
    }
    return rows;
}

std::string estimate_report_json(const EstimateReport& rep) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json jc;
    for (const auto& [name, value] : reported_constants(rep.constants)) jc[name] = value;
    jc["q"] = rep.constants.q;
    jc["p0"] = rep.constants.p0;
    jc["moser_p0"] = rep.constants.moser_p0;
    jc["s0"] = rep.constants.s0;
    jc["level_eps"] = rep.constants.level_eps;
    j["constants"] = jc;
    j["assembled_C"] = rep.assembled_C;
    j["all_pass"] = rep.all_pass;
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& ins : rep.instances) {
        nlohmann::ordered_json ji;
        ji["cherrier_p"] = ins.cherrier_p;
        ji["cherrier_ratios"] = ins.cherrier_ratios;
        ji["cherrier_ok"] = ins.cherrier_ok;
        ji["sobolev_ok"] = ins.sobolev_ok;
        ji["level_ok"] = ins.level_ok;
        ji["moser_p"] = ins.moser.p_values;
        ji["moser_log_norms"] = ins.moser.log_norms;
        ji["moser_recursion_ok"] = ins.moser.recursion_ok;
        ji["moser_final_ok"] = ins.moser.final_ok;
        ji["exp_inf_log_lhs"] = ins.exp_inf.log_lhs;
        ji["exp_inf_log_rhs"] = ins.exp_inf.log_rhs;
        ji["exp_inf_ok"] = ins.exp_inf.holds;
        ji["sublevel_measure"] = ins.sublevel_found;
        ji["sublevel_ok"] = ins.sublevel_ok;
        ji["stokes_max_residual"] = ins.stokes_max_residual;
        ji["stokes_ok"] = ins.stokes_ok;
        ji["l1_phi"] = ins.l1_phi;
        ji["l1_ok"] = ins.l1_ok;
        ji["sup_abs_phi"] = ins.sup_abs_phi;
        ji["c0_bound_ok"] = ins.c0_bound_ok;
        ji["all_ok"] = ins.all_ok;
        arr.push_back(ji);
    }
    j["instances"] = arr;
    return j.dump(2) + "\n";
}

std::vector<std::pair<std::string, double>> reported_constants(const FittedConstants& fc) {
    std::vector<std::pair<std::string, double>> out = {
        {"cherrier_C", fc.cherrier_C},
        {"sobolev_C", fc.sobolev_C},
        {"moser_recursion_C", std::exp(fc.log_moser_C)},
        {"moser_final_C", fc.moser_final_C},
        {"exp_bound_expC", std::exp(fc.exp_bound_C)},
        {"C1", fc.C1},
        {"C2", fc.C2},
        {"C3", fc.C3},
    };
    for (std::size_t i = 0; i < fc.level_C.size(); ++i)
        out.emplace_back("level_C" + std::to_string(i + 1), fc.level_C[i]);
    return out;
}

}  // namespace qma
