#include "qma/solver.hpp"

#include "qma/estimates.hpp"
#include "qma/simdiag.hpp"
#include "qma/torus_ops.hpp"
#include "qma/two_form.hpp"
#include "qma/wedge_identities.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace qma;

TEST_CASE("normalization constant") {
    const SpectralGrid g(1, {0}, 32);
    CHECK(normalization_constant(ScalarField(g, 0.0)) == doctest::Approx(1.0));
    CHECK(normalization_constant(ScalarField(g, 0.7)) == doctest::Approx(std::exp(-0.7)));
    std::mt19937_64 rng(3);
    const ScalarField F = oracles::random_band_limited(g, rng, 3, 0.8);
    const double A = normalization_constant(F);
    // Int (1 - A e^F) dVol = 0
    ScalarField integrand(g, 1.0);
    const ScalarField eF = exp_field(F);
    for (std::size_t i = 0; i < integrand.size(); ++i) integrand[i] = 1.0 - A * eF[i];
    CHECK(std::abs(integrate(integrand)) < 1e-12 * volume_scale(1));
}

TEST_CASE("linear n = 1 solve") {
    SUBCASE("trivial data") {
        const SpectralGrid g(1, {0}, 32);
        const SolveReport rep = solve_linear_n1(ScalarField(g, 0.0));
        CHECK(rep.success);
        CHECK(rep.A == doctest::Approx(1.0));
        CHECK(oracles::max_abs(rep.phi) < 1e-13);
    }

    SUBCASE("harmonic forcing against the Fourier-Bessel closed form") {
        const SpectralGrid g(1, {0}, 64);
        const double eps = 0.1;
        const ScalarField F = ScalarField::sample(
            g, [&](const std::vector<double>& x) { return eps * std::cos(2.0 * M_PI * x[0]); });
        const SolveReport rep = solve_linear_n1(F);
        CHECK(rep.success);
        CHECK(rep.residual <= 1e-10);
        const ScalarField closed = oracles::bessel_harmonic_solution(g, eps);
        CHECK(oracles::sup_diff(rep.phi, closed) < 1e-8);

        // Omega_phi against Omega at every grid point: q-positive with real
        // nonnegative relative eigenvalues
        const HypercomplexFrame frame = standard_frame(1);
        const TwoFormQ omega = standard_omega(frame);
        const TwoFormField omega_phi = hkt_form_of(rep.phi);
        for (std::size_t p = 0; p < g.num_points(); ++p) {
            const TwoFormQ w2 = TwoFormQ::antisymmetrize(omega_phi.matrix_at(p));
            CHECK(is_q_positive(frame, w2));
            const DiagonalizationResult d = simultaneous_diagonalize(frame, omega, w2);
            CHECK(std::abs(d.eigenvalues(0).imag()) <= 1e-9);
            CHECK(d.eigenvalues(0).real() >= -1e-9);
        }
    }

    SUBCASE("rough data is reported, not silently accepted") {
        const SpectralGrid g(1, {0}, 8);
        const ScalarField F = ScalarField::sample(
            g, [](const std::vector<double>& x) { return 3.0 * std::cos(2.0 * M_PI * x[0]); });
        const SolveReport rep = solve_linear_n1(F);
        CHECK_FALSE(rep.success);
        CHECK(rep.message != "converged");
    }

    SUBCASE("random band-limited forcing") {
        // N = 16 keeps the Nyquist tail of e^F below the linear-regime tolerance
        const SpectralGrid g(1, {0, 1, 2, 3}, 16);
        std::mt19937_64 rng(7);
        for (int t = 0; t < 3; ++t) {
            const ScalarField F = oracles::random_band_limited(g, rng, 1, 0.3);
            const SolveReport rep = solve_linear_n1(F);
            CHECK(rep.success);
            CHECK(rep.residual <= 1e-10);
            CHECK(rep.min_rel_eigenvalue > 0.0);
            // the solved HKT form is q-positive at every grid point
            const HypercomplexFrame frame = standard_frame(1);
            const TwoFormField omega_phi = hkt_form_of(rep.phi);
            for (std::size_t p = 0; p < g.num_points(); p += 97)
                CHECK(is_q_positive(frame, TwoFormQ::antisymmetrize(omega_phi.matrix_at(p))));
        }
    }

    SUBCASE("rejects n != 1") {
        const SpectralGrid g(2, {0, 4}, 8);
        CHECK_THROWS_AS((void)solve_linear_n1(ScalarField(g, 0.0)), std::invalid_argument);
    }
}

TEST_CASE("linearized operator") {
    const SpectralGrid g(2, {0, 4}, 16);
    std::mt19937_64 rng(11);
    const ScalarField phi = oracles::random_band_limited(g, rng, 1, 0.05);
    const ScalarField psi = oracles::random_band_limited(g, rng, 2, 0.5);

    SUBCASE("annihilates constants") {
        CHECK(oracles::max_abs(linearized_operator(phi, ScalarField(g, 3.0))) < 1e-12);
    }

    SUBCASE("reduces to the quaternionic Laplacian at phi = 0") {
        const ScalarField L = linearized_operator(ScalarField(g, 0.0), psi);
        ScalarField lap(g, 0.0);
        for (int c : g.active) lap += derivative(derivative(psi, c), c);
        double worst = 0.0;
        for (std::size_t p = 0; p < g.num_points(); ++p)
            worst = std::max(worst, std::abs(L[p] - lap[p] / 4.0));
        CHECK(worst < 1e-11);
    }

    SUBCASE("matches central finite differences at order >= 1.9") {
        const ScalarField L = linearized_operator(phi, psi);
        auto fd_error = [&](double h) {
            const ScalarField dp = log_field(ma_density(phi + h * psi));
            const ScalarField dm = log_field(ma_density(phi + (-h) * psi));
            double worst = 0.0;
            for (std::size_t p = 0; p < g.num_points(); ++p)
                worst = std::max(worst, std::abs((dp[p] - dm[p]) / (2.0 * h) - L[p]));
            return worst;
        };
        const double e3 = fd_error(1e-3);
        const double e4 = fd_error(1e-4);
        const double order = std::log10(e3 / e4);
        CHECK(order >= 1.9);
    }

    SUBCASE("positivity loss is an error") {
        // a potential violent enough to push the density negative somewhere
        const ScalarField bad = ScalarField::sample(g, [](const std::vector<double>& x) {
            return 0.5 * std::cos(2.0 * M_PI * x[0]);
        });
        CHECK(ma_density(bad).min() < 0.0);
        CHECK_THROWS_AS((void)linearized_operator(bad, psi), std::runtime_error);
    }
}

TEST_CASE("full solver") {
    SUBCASE("F = 0 converges immediately to zero") {
        const SpectralGrid g(2, {0, 4}, 8);
        SolveConfig cfg;
        cfg.continuity_steps = 1;
        const SolveReport rep = solve_qma(ScalarField(g, 0.0), cfg);
        CHECK(rep.success);
        CHECK(oracles::max_abs(rep.phi) < 1e-12);
        CHECK(rep.newton_iters == std::vector<int>{0});
    }

    SUBCASE("n = 1 full grid agrees with the linear solve") {
        const SpectralGrid g(1, {0, 1, 2, 3}, 16);
        const ScalarField F = ScalarField::sample(g, [](const std::vector<double>& x) {
            return 0.1 * std::cos(2.0 * M_PI * x[0]) + 0.08 * std::cos(2.0 * M_PI * x[2]);
        });
        const SolveReport lin = solve_linear_n1(F);
        const SolveReport full = solve_qma(F);
        CHECK(lin.success);
        CHECK(full.success);
        CHECK(oracles::sup_diff(lin.phi, full.phi) < 1e-9);
    }

    SUBCASE("n = 2 reduced problem against the damped Picard oracle") {
        const SpectralGrid g(2, {0, 4}, 32);
        const ScalarField F = ScalarField::sample(g, [](const std::vector<double>& x) {
            return 0.5 * (std::cos(2.0 * M_PI * x[0]) + std::cos(2.0 * M_PI * x[4]));
        });
        const SolveReport rep = solve_qma(F);
        CHECK(rep.success);
        CHECK(rep.residual <= 1e-8);
        CHECK(rep.min_rel_eigenvalue >= -1e-9);
        const oracles::PicardResult picard = oracles::damped_picard(F);
        REQUIRE(picard.converged);
        CHECK(oracles::sup_diff(rep.phi, picard.phi) < 1e-6);
    }

    SUBCASE("gauge invariance under F -> F + const") {
        const SpectralGrid g(2, {0, 4}, 32);
        std::mt19937_64 rng(13);
        const ScalarField F = oracles::random_band_limited(g, rng, 1, 0.3);
        const SolveReport a = solve_qma(F);
        const SolveReport b = solve_qma(F.shifted(1.3));
        CHECK(a.success);
        CHECK(b.success);
        CHECK(oracles::sup_diff(a.phi, b.phi) < 1e-10);
    }

    SUBCASE("mass conservation at convergence") {
        const SpectralGrid g(2, {0, 4}, 32);
        std::mt19937_64 rng(17);
        const ScalarField F = oracles::random_band_limited(g, rng, 1, 0.4);
        const SolveReport rep = solve_qma(F);
        CHECK(rep.success);
        const double lhs = integrate(ma_density(rep.phi));
        ScalarField rhs_field = exp_field(F);
        for (std::size_t i = 0; i < rhs_field.size(); ++i) rhs_field[i] *= rep.A;
        const double rhs = integrate(rhs_field);
        CHECK(std::abs(lhs - rhs) / std::abs(rhs) < 1e-9);
    }

    SUBCASE("newton quadratic tail") {
        const SpectralGrid g(2, {0, 4}, 32);
        const ScalarField F = ScalarField::sample(g, [](const std::vector<double>& x) {
            return 0.5 * (std::cos(2.0 * M_PI * x[0]) + std::cos(2.0 * M_PI * x[4]));
        });
        const SolveReport rep = solve_qma(F);
        REQUIRE(rep.success);
        for (const auto& hist : rep.residual_history) {
            if (hist.size() < 3) continue;
            const double r_prev = hist[hist.size() - 2];
            const double r_last = hist[hist.size() - 1];
            if (r_prev < 1e-12) continue;  // already at the floor
            CHECK(r_last <= 1e3 * r_prev * r_prev + 1e-14);
        }
    }

    SUBCASE("positivity margin stays nonnegative along the path") {
        const SpectralGrid g(2, {0, 4}, 32);
        std::mt19937_64 rng(19);
        const ScalarField F = oracles::random_band_limited(g, rng, 1, 0.5);
        const SolveReport rep = solve_qma(F);
        CHECK(rep.success);
        CHECK(rep.path_min_eigenvalue >= -1e-9);
    }

    SUBCASE("single-block active set is rejected at n = 2") {
        const SpectralGrid g(2, {0, 1}, 8);
        CHECK_THROWS_AS((void)solve_qma(ScalarField(g, 0.0)), std::invalid_argument);
    }

    SUBCASE("iteration cap reports divergence instead of throwing") {
        const SpectralGrid g(2, {0, 4}, 16);
        const ScalarField F = ScalarField::sample(g, [](const std::vector<double>& x) {
            return 0.5 * (std::cos(2.0 * M_PI * x[0]) + std::cos(2.0 * M_PI * x[4]));
        });
        SolveConfig cfg;
        cfg.max_newton_iters = 0;
        const SolveReport rep = solve_qma(F, cfg);
        CHECK_FALSE(rep.success);
        CHECK(rep.message.find("t =") != std::string::npos);
    }
}

TEST_CASE("report serialization excludes wall time by default") {
    const SpectralGrid g(1, {0}, 8);
    const SolveReport rep = solve_linear_n1(ScalarField(g, 0.0));
    const std::string a = solve_report_json(rep);
    CHECK(a.find("wall_seconds") == std::string::npos);
    CHECK(solve_report_json(rep, true).find("wall_seconds") != std::string::npos);
    CHECK(a == solve_report_json(rep));  // deterministic
}
