#include "qma/solver.hpp"

#include "qma/field_io.hpp"
#include "qma/torus_ops.hpp"
#include "qma/two_form.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace qma {

namespace {

double sup_abs(const ScalarField& f) {
    double m = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) m = std::max(m, std::abs(f[i]));
    return m;
}

ScalarField mean_projected(const ScalarField& f) { return f.shifted(-f.mean()); }

// L_phi psi = n (d dJ psi ^ Omega_phi^{n-1}) / Omega_phi^n evaluated with a
// precomputed Omega_phi field and its density.
ScalarField apply_linearization(const TwoFormField& omega_phi, const ScalarField& density,
                                const ScalarField& psi) {
    const SpectralGrid& g = psi.grid();
    const int n = g.n;
    const TwoFormField hess = del_del_J(psi);
    ScalarField out(g, 0.0);
    if (n <= 2) {
        for (std::size_t p = 0; p < out.size(); ++p) {
            const std::complex<double> top =
                two_form_pair_top_ratio(hess.matrix_at(p), omega_phi.matrix_at(p));
            out[p] = static_cast<double>(n) * top.real() / density[p];
        }
    } else {
        for (std::size_t p = 0; p < out.size(); ++p) {
            std::vector<Eigen::MatrixXcd> factors{hess.matrix_at(p)};
            for (int k = 0; k < n - 1; ++k) factors.push_back(omega_phi.matrix_at(p));
            out[p] = static_cast<double>(n) * wedge_top_ratio(factors, n).real() / density[p];
        }
    }
    return out;
}

// Left-preconditioned restarted GMRES on mean-zero fields.
struct GmresResult {
    ScalarField x;
    double rel_residual = 0.0;
    int iterations = 0;
};

double dot(const ScalarField& a, const ScalarField& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

// Restarted GMRES with modified Gram-Schmidt and Givens rotations.
GmresResult gmres(const std::function<ScalarField(const ScalarField&)>& op, const ScalarField& b,
                  double tol, int max_iters) {
    const int restart = 60;
    GmresResult res{ScalarField(b.grid(), 0.0), 0.0, 0};
    const double bnorm = std::sqrt(dot(b, b));
    if (bnorm == 0.0) return res;

    ScalarField x(b.grid(), 0.0);
    int total = 0;
    bool converged = false;
    while (total < max_iters && !converged) {
        ScalarField r = b - op(x);
        const double beta = std::sqrt(dot(r, r));
        if (beta / bnorm <= tol) {
            converged = true;
            break;
        }
        const int m = std::min(restart, max_iters - total);
        std::vector<ScalarField> V;
        V.push_back((1.0 / beta) * r);
        std::vector<std::vector<double>> H(m + 1, std::vector<double>(m, 0.0));
        std::vector<double> cs(m, 0.0), sn(m, 0.0), s(m + 1, 0.0);
        s[0] = beta;
        int cols = 0;
        for (int k = 0; k < m; ++k) {
            ScalarField w = op(V[k]);
            for (int i = 0; i <= k; ++i) {
                H[i][k] = dot(w, V[i]);
                w -= H[i][k] * V[i];
            }
            H[k + 1][k] = std::sqrt(dot(w, w));
            const bool breakdown = H[k + 1][k] <= 1e-14 * beta;
            if (!breakdown) V.push_back((1.0 / H[k + 1][k]) * w);
            for (int i = 0; i < k; ++i) {
                const double t = cs[i] * H[i][k] + sn[i] * H[i + 1][k];
                H[i + 1][k] = -sn[i] * H[i][k] + cs[i] * H[i + 1][k];
                H[i][k] = t;
            }
            const double denom = std::hypot(H[k][k], H[k + 1][k]);
            cs[k] = denom == 0.0 ? 1.0 : H[k][k] / denom;
            sn[k] = denom == 0.0 ? 0.0 : H[k + 1][k] / denom;
            H[k][k] = denom;
            H[k + 1][k] = 0.0;
            s[k + 1] = -sn[k] * s[k];
            s[k] = cs[k] * s[k];
            ++total;
            cols = k + 1;
            if (std::abs(s[k + 1]) / bnorm <= tol || breakdown) break;
        }
        std::vector<double> y(cols, 0.0);
        for (int i = cols - 1; i >= 0; --i) {
            double acc = s[i];
            for (int j = i + 1; j < cols; ++j) acc -= H[i][j] * y[j];
            y[i] = H[i][i] == 0.0 ? 0.0 : acc / H[i][i];
        }
        for (int i = 0; i < cols; ++i) x += y[i] * V[i];
        ScalarField rr = b - op(x);
        if (std::sqrt(dot(rr, rr)) / bnorm <= tol) converged = true;
    }
    ScalarField rfin = b - op(x);
    res.x = x;
    res.rel_residual = std::sqrt(dot(rfin, rfin)) / bnorm;
    res.iterations = total;
    return res;
}

}  // namespace

double normalization_constant(const ScalarField& F) { return 1.0 / exp_field(F).mean(); }

ScalarField quaternionic_laplacian_inverse(const ScalarField& rhs) {
    const SpectralGrid& g = rhs.grid();
    const double pi2 = M_PI * M_PI;
    const ComplexField sol = analyze(rhs).inverse_with_symbol([&](const std::vector<int>& k) {
        double k2 = 0.0;
        for (int a = 0; a < g.dims(); ++a) k2 += static_cast<double>(k[a]) * k[a];
        if (k2 == 0.0) return std::complex<double>(0.0, 0.0);
        return std::complex<double>(-1.0 / (pi2 * k2), 0.0);
    });
    ScalarField out(g, 0.0);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = sol.v[i].real();
    return out;
}

SolveReport solve_linear_n1(const ScalarField& F, const SolveConfig&) {
    const auto t0 = std::chrono::steady_clock::now();
    const SpectralGrid& g = F.grid();
    if (g.n != 1) throw std::invalid_argument("solve_linear_n1: requires n = 1");
    SolveReport rep;
    rep.A = normalization_constant(F);
    // density = 1 + 1/4 Delta phi  =>  1/4 Delta phi = A e^F - 1
    ScalarField rhs(g, 0.0);
    const ScalarField eF = exp_field(F);
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = rep.A * eF[i] - 1.0;
    ScalarField phi = quaternionic_laplacian_inverse(mean_projected(rhs));
    phi = phi.shifted(-phi.max());  // sup normalization

    const ScalarField density = ma_density(phi);
    double resid = 0.0;
    for (std::size_t i = 0; i < density.size(); ++i)
        resid = std::max(resid, std::abs(density[i] - rep.A * eF[i]));
    rep.phi = phi;
    rep.residual = resid;
    rep.min_rel_eigenvalue = min_relative_eigenvalue(phi);
    rep.path_min_eigenvalue = rep.min_rel_eigenvalue;
    rep.newton_iters = {1};
    rep.success = resid <= 1e-10 && rep.min_rel_eigenvalue >= -1e-9;
    rep.message = rep.success ? "converged"
                  : rep.min_rel_eigenvalue < -1e-9
                      ? "q-positivity violated: data too rough for the linear regime"
                      : "residual above linear-regime tolerance";
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

ScalarField linearized_operator(const ScalarField& phi, const ScalarField& psi) {
    const TwoFormField omega_phi = hkt_form_of(phi);
    const ScalarField density = ma_density(phi);
    double dmin = density[0];
    for (std::size_t i = 0; i < density.size(); ++i) dmin = std::min(dmin, density[i]);
    if (!(dmin > 0.0) || min_relative_eigenvalue(phi) <= 0.0)
        throw std::runtime_error("linearized_operator: Omega_phi is not strictly q-positive");
    return apply_linearization(omega_phi, density, psi);
}

SolveReport solve_qma(const ScalarField& F, const SolveConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    const SpectralGrid& g = F.grid();
    if (g.n != 1 && g.n != 2)
        throw std::invalid_argument("solve_qma: n in {1, 2} supported");
    if (g.n == 2) {
        bool block0 = false, block1 = false;
        for (int c : g.active) (c < 4 ? block0 : block1) = true;
        if (!block0 || !block1)
            throw std::invalid_argument(
                "solve_qma: at n = 2 the active set must intersect both quaternionic blocks "
                "(otherwise the density is affine)");
    }

    SolveReport rep;
    rep.phi = ScalarField(g, 0.0);
    rep.path_min_eigenvalue = 1.0;
    ScalarField phi(g, 0.0);

    const int m = cfg.continuity_steps;
    for (int step = 1; step <= m; ++step) {
        const double t = static_cast<double>(step) / m;
        const ScalarField Ft = t * F;
        const double At = normalization_constant(Ft);
        ScalarField target(g, 0.0);
        for (std::size_t i = 0; i < target.size(); ++i) target[i] = std::log(At) + Ft[i];

        std::vector<double> history;
        int iters = 0;
        for (; iters < cfg.max_newton_iters; ++iters) {
            const TwoFormField omega_phi = hkt_form_of(phi);
            const ScalarField density = ma_density(phi);
            double dmin = density[0];
            for (std::size_t i = 0; i < density.size(); ++i) dmin = std::min(dmin, density[i]);
            if (!(dmin > 0.0)) {
                rep.message = "positivity loss at t = " + format_double(t);
                rep.phi = phi;
                rep.success = false;
                return rep;
            }
            ScalarField R(g, 0.0);
            for (std::size_t i = 0; i < R.size(); ++i) R[i] = std::log(density[i]) - target[i];
            const double rnorm = sup_abs(R);
            history.push_back(rnorm);
            if (rnorm <= cfg.newton_tol) break;

            auto op = [&](const ScalarField& v) {
                return mean_projected(apply_linearization(omega_phi, density, mean_projected(v)));
            };
            auto precond_op = [&](const ScalarField& v) {
                return quaternionic_laplacian_inverse(op(v));
            };
            const ScalarField b = quaternionic_laplacian_inverse(mean_projected(-1.0 * R));
            const GmresResult lin = gmres(precond_op, b, cfg.linear_tol, cfg.max_linear_iters);
            ScalarField delta = mean_projected(lin.x);

            double s = cfg.damping;
            bool accepted = false;
            for (int h = 0; h <= cfg.positivity_halvings; ++h) {
                const ScalarField trial = phi + s * delta;
                const double margin = min_relative_eigenvalue(trial);
                if (margin > -1e-12) {
                    const ScalarField dtrial = ma_density(trial);
                    double tmin = dtrial[0];
                    for (std::size_t i = 0; i < dtrial.size(); ++i) tmin = std::min(tmin, dtrial[i]);
                    if (tmin > 0.0) {
                        ScalarField Rt(g, 0.0);
                        for (std::size_t i = 0; i < Rt.size(); ++i)
                            Rt[i] = std::log(dtrial[i]) - target[i];
                        if (sup_abs(Rt) < rnorm) {
                            phi = trial;
                            rep.path_min_eigenvalue = std::min(rep.path_min_eigenvalue, margin);
                            accepted = true;
                            break;
                        }
                    }
                }
                s *= 0.5;
            }
            if (!accepted) {
                if (rnorm <= cfg.stall_accept) break;  // stagnated at the grid's floor
                rep.message = "Newton divergence at t = " + format_double(t) +
                              " (no acceptable step after halvings)";
                rep.phi = phi;
                rep.success = false;
                return rep;
            }
        }
        rep.newton_iters.push_back(iters);
        rep.residual_history.push_back(history);
        if (iters >= cfg.max_newton_iters) {
            rep.message = "Newton divergence at t = " + format_double(t) + " (iteration cap)";
            rep.phi = phi;
            rep.success = false;
            return rep;
        }
    }

    phi = phi.shifted(-phi.max());  // sup normalization, applied last
    rep.phi = phi;
    rep.A = normalization_constant(F);
    const ScalarField density = ma_density(phi);
    const ScalarField eF = exp_field(F);
    double resid = 0.0;
    for (std::size_t i = 0; i < density.size(); ++i)
        resid = std::max(resid, std::abs(density[i] - rep.A * eF[i]));
    rep.residual = resid;
    rep.min_rel_eigenvalue = min_relative_eigenvalue(phi);
    rep.path_min_eigenvalue = std::min(rep.path_min_eigenvalue, rep.min_rel_eigenvalue);
    rep.success = resid <= cfg.residual_tol && rep.min_rel_eigenvalue >= -1e-9;
    rep.message = rep.success ? "converged" : "final residual above the configured tolerance";
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

std::string solve_report_json(const SolveReport& report, bool include_wall_time) {
    nlohmann::ordered_json j;
    j["A"] = report.A;
    j["residual"] = report.residual;
    j["min_rel_eigenvalue"] = report.min_rel_eigenvalue;
    j["path_min_eigenvalue"] = report.path_min_eigenvalue;
    j["newton_iters"] = report.newton_iters;
    j["residual_history"] = report.residual_history;
    j["success"] = report.success;
    j["message"] = report.message;
    j["sup_phi"] = report.phi.size() ? report.phi.max() : 0.0;
    j["inf_phi"] = report.phi.size() ? report.phi.min() : 0.0;
    if (include_wall_time) j["wall_seconds"] = report.wall_seconds;
    return j.dump(2) + "\n";
}

}  // namespace qma
