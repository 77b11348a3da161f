#include "qma/torus_ops.hpp"

#include "qma/simdiag.hpp"
#include "qma/two_form.hpp"
#include "qma/wedge_identities.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace qma;
using Cplx = std::complex<double>;

namespace {

double one_form_max(const OneFormField& w) {
    double m = 0.0;
    for (const auto& c : w.comp) m = std::max(m, std::abs(c));
    return m;
}

double two_form_field_max(const TwoFormField& f) {
    double m = 0.0;
    for (std::size_t p = 0; p < f.grid().num_points(); ++p)
        m = std::max(m, f.matrix_at(p).cwiseAbs().maxCoeff());
    return m;
}

double two_form_sum_max(const TwoFormField& a, const TwoFormField& b) {
    double m = 0.0;
    for (std::size_t p = 0; p < a.grid().num_points(); ++p)
        m = std::max(m, (a.matrix_at(p) + b.matrix_at(p)).cwiseAbs().maxCoeff());
    return m;
}

}  // namespace

TEST_CASE("first-order operators on closed forms") {
    const SpectralGrid g(1, {0, 1, 2, 3}, 8);

    SUBCASE("constants map to zero") {
        const ScalarField c(g, 2.0);
        CHECK(one_form_max(del(c)) < 1e-14);
        CHECK(one_form_max(del_bar(c)) < 1e-14);
        CHECK(one_form_max(del_J(c)) < 1e-14);
    }

    SUBCASE("del of sin(2 pi x1) is pi cos dz0") {
        const ScalarField f = ScalarField::sample(
            g, [](const std::vector<double>& x) { return std::sin(2.0 * M_PI * x[0]); });
        const OneFormField df = del(f);
        for (std::size_t p = 0; p < g.num_points(); ++p) {
            const double expect = M_PI * std::cos(2.0 * M_PI * g.point(p)[0]);
            CHECK(std::abs(df.at(0, p) - Cplx(expect)) < 1e-12);
            CHECK(std::abs(df.at(1, p)) < 1e-13);
        }
    }

    SUBCASE("del of sin(2 pi x2) carries the -i pi cos coefficient") {
        const ScalarField f = ScalarField::sample(
            g, [](const std::vector<double>& x) { return std::sin(2.0 * M_PI * x[1]); });
        const OneFormField df = del(f);
        for (std::size_t p = 0; p < g.num_points(); p += 7) {
            const double c = std::cos(2.0 * M_PI * g.point(p)[1]);
            CHECK(std::abs(df.at(0, p) - Cplx(0.0, -M_PI * c)) < 1e-12);
        }
    }

    SUBCASE("del_bar is the conjugate of del on real fields") {
        std::mt19937_64 rng(3);
        const ScalarField f = oracles::random_band_limited(g, rng, 2, 0.7);
        const OneFormField df = del(f);
        const OneFormField dbf = del_bar(f);
        double worst = 0.0;
        for (int h = 0; h < 2; ++h)
            for (std::size_t p = 0; p < g.num_points(); ++p)
                worst = std::max(worst, std::abs(dbf.at(h, p) - std::conj(df.at(h, p))));
        CHECK(worst < 1e-13);
    }

    SUBCASE("del_J of sin(2 pi x1) is pi cos dz1") {
        const ScalarField f = ScalarField::sample(
            g, [](const std::vector<double>& x) { return std::sin(2.0 * M_PI * x[0]); });
        const OneFormField djf = del_J(f);
        for (std::size_t p = 0; p < g.num_points(); p += 5) {
            const double expect = M_PI * std::cos(2.0 * M_PI * g.point(p)[0]);
            CHECK(std::abs(djf.at(1, p) - Cplx(expect)) < 1e-12);
            CHECK(std::abs(djf.at(0, p)) < 1e-13);
        }
    }
}

TEST_CASE("del and del_J anticommute on scalars") {
    std::mt19937_64 rng(7);
    const SpectralGrid full(1, {0, 1, 2, 3}, 8);
    const SpectralGrid reduced(2, {0, 4}, 16);
    for (const SpectralGrid& g : {full, reduced}) {
        for (int t = 0; t < 5; ++t) {
            const ScalarField f = oracles::random_band_limited(g, rng, 2, 0.8);
            const TwoFormField a = del_oneform(del_J(f));
            const TwoFormField b = del_J_oneform(del(f));
            const double scale = two_form_field_max(a) + 1e-30;
            CHECK(two_form_sum_max(a, b) / scale < 1e-11);
        }
    }
}

TEST_CASE("del_del_J") {
    SUBCASE("zero potential") {
        const SpectralGrid g(2, {0, 4}, 8);
        CHECK(two_form_field_max(del_del_J(ScalarField(g, 0.0))) < 1e-14);
    }

    SUBCASE("analytic Hessian of a single harmonic") {
        // phi = cos(2 pi x1): G_00 = -pi^2 cos, all other entries 0, so
        // A_01 = G_00 and the other slots vanish.
        const SpectralGrid g(1, {0, 1, 2, 3}, 8);
        const ScalarField phi = ScalarField::sample(
            g, [](const std::vector<double>& x) { return std::cos(2.0 * M_PI * x[0]); });
        const TwoFormField ddj = del_del_J(phi);
        for (std::size_t p = 0; p < g.num_points(); p += 3) {
            const double expect = -M_PI * M_PI * std::cos(2.0 * M_PI * g.point(p)[0]);
            CHECK(std::abs(ddj.upper(0, 1, p) - Cplx(expect)) < 1e-11);
        }
    }

    SUBCASE("sum of harmonics on every coordinate matches the quaternionic trace") {
        // phi = sum_c cos(2 pi x_c): the pairing trace is 2 sum G_hh = 1/2 Delta phi
        const SpectralGrid g(1, {0, 1, 2, 3}, 8);
        ScalarField phi(g, 0.0);
        for (int c = 0; c < 4; ++c)
            phi += ScalarField::sample(g, [c](const std::vector<double>& x) {
                return std::cos(2.0 * M_PI * x[c]) / (4.0 * M_PI * M_PI);
            });
        const TwoFormField ddj = del_del_J(phi);
        for (std::size_t p = 0; p < g.num_points(); p += 11) {
            double lap = 0.0;
            for (int c = 0; c < 4; ++c) lap += -std::cos(2.0 * M_PI * g.point(p)[c]);
            CHECK(std::abs(ddj.upper(0, 1, p).real() - lap / 4.0) < 1e-11);
        }
    }

    SUBCASE("q-real at every sampled point") {
        std::mt19937_64 rng(11);
        const SpectralGrid g(2, {0, 4}, 16);
        const ScalarField phi = oracles::random_band_limited(g, rng, 2, 0.6);
        CHECK(q_real_defect_max(del_del_J(phi), 3) < 1e-12);
    }
}

TEST_CASE("monge-ampere density") {
    SUBCASE("zero potential gives unit density") {
        const SpectralGrid g(2, {0, 4}, 8);
        const ScalarField d = ma_density(ScalarField(g, 0.0));
        CHECK(std::abs(d.min() - 1.0) < 1e-14);
        CHECK(std::abs(d.max() - 1.0) < 1e-14);
    }

    SUBCASE("n = 1 density is affine: 1 + Laplacian/4") {
        const SpectralGrid g(1, {0, 1, 2, 3}, 8);
        std::mt19937_64 rng(13);
        const ScalarField phi = oracles::random_band_limited(g, rng, 2, 0.2);
        const ScalarField d = ma_density(phi);
        ScalarField lap(g, 0.0);
        for (int c = 0; c < 4; ++c) lap += derivative(derivative(phi, c), c);
        double worst = 0.0;
        for (std::size_t p = 0; p < g.num_points(); ++p)
            worst = std::max(worst, std::abs(d[p] - 1.0 - lap[p] / 4.0));
        CHECK(worst < 1e-11);
    }

    SUBCASE("exterior path agrees with the eigenvalue product") {
        const SpectralGrid g(2, {0, 4}, 12);
        std::mt19937_64 rng(17);
        const ScalarField phi = oracles::random_band_limited(g, rng, 1, 0.15);
        const ScalarField a = ma_density(phi);
        const ScalarField b = ma_density_eigen(phi);
        CHECK(oracles::sup_diff(a, b) < 1e-10);
    }

    SUBCASE("single-block active set degenerates to an affine operator") {
        const SpectralGrid g(2, {0, 1}, 12);
        std::mt19937_64 rng(19);
        const ScalarField p1 = oracles::random_band_limited(g, rng, 2, 0.4);
        const ScalarField p2 = oracles::random_band_limited(g, rng, 2, 0.4);
        const ScalarField d1 = ma_density(p1);
        const ScalarField d2 = ma_density(p2);
        const ScalarField dsum = ma_density(p1 + p2);
        double worst = 0.0;
        for (std::size_t p = 0; p < g.num_points(); ++p)
            worst = std::max(worst, std::abs((dsum[p] - 1.0) - (d1[p] - 1.0) - (d2[p] - 1.0)));
        CHECK(worst < 1e-11);
    }
}

TEST_CASE("gradient energy") {
    SUBCASE("constant field carries no energy") {
        const SpectralGrid g(2, {0, 4}, 8);
        CHECK(std::abs(gradient_energy(ScalarField(g, 5.0))) < 1e-13);
    }

    SUBCASE("single harmonic matches Parseval") {
        const SpectralGrid g(1, {0}, 32);
        const ScalarField u = ScalarField::sample(
            g, [](const std::vector<double>& x) { return std::sin(2.0 * M_PI * x[0]); });
        // |del u|^2 = pi^2 cos^2, mean pi^2/2, times the volume element
        const double expect = M_PI * M_PI / 2.0 * volume_scale(1);
        CHECK(gradient_energy(u) == doctest::Approx(expect).epsilon(1e-11));
        CHECK(gradient_energy_direct(u) == doctest::Approx(expect).epsilon(1e-11));
    }

    SUBCASE("wedge path equals the coordinate path") {
        std::mt19937_64 rng(23);
        for (const SpectralGrid& g :
             {SpectralGrid(1, {0, 1, 2, 3}, 8), SpectralGrid(2, {0, 4}, 16)}) {
            for (int t = 0; t < 5; ++t) {
                const ScalarField u = oracles::random_band_limited(g, rng, 2, 0.8);
                const double a = gradient_energy(u);
                const double b = gradient_energy_direct(u);
                CHECK(std::abs(a - b) / (std::abs(b) + 1e-30) < 1e-9);
            }
        }
    }
}

TEST_CASE("discrete Stokes: exact forms integrate to zero") {
    std::mt19937_64 rng(29);
    for (const SpectralGrid& g : {SpectralGrid(1, {0, 1, 2, 3}, 8), SpectralGrid(2, {0, 4}, 16)}) {
        const int n = g.n;
        const Eigen::MatrixXcd omega_m = standard_omega_matrix(n);
        for (int t = 0; t < 5; ++t) {
            const ScalarField psi = oracles::random_band_limited(g, rng, 2, 0.8);
            const TwoFormField hess = del_del_J(psi);
            double acc = 0.0, scale = 0.0;
            for (std::size_t p = 0; p < g.num_points(); ++p) {
                std::vector<Eigen::MatrixXcd> factors{hess.matrix_at(p)};
                for (int k = 0; k < n - 1; ++k) factors.push_back(omega_m);
                const double v = wedge_top_ratio(factors, n).real();
                acc += v;
                scale += std::abs(v);
            }
            CHECK(std::abs(acc) / (scale + 1e-30) < 1e-10);
        }
    }
}

TEST_CASE("flat HKT form has constant coefficients (beta = 0)") {
    // Omega is the same integer matrix at every grid point; its coefficients
    // are constants, so del of each coefficient field vanishes identically
    // and d(Omegabar^n) = beta ^ Omegabar^n forces beta = 0.
    const SpectralGrid g(2, {0, 4}, 8);
    const TwoFormField omega_field = hkt_form_of(ScalarField(g, 0.0));
    const Eigen::MatrixXcd expect = standard_omega_matrix(2);
    for (std::size_t p = 0; p < g.num_points(); ++p)
        CHECK((omega_field.matrix_at(p) - expect).cwiseAbs().maxCoeff() == 0.0);
    // spectral derivative of the constant coefficient field
    const ScalarField coeff(g, 1.0);
    for (int c : g.active) CHECK(oracles::max_abs(derivative(coeff, c)) < 1e-14);
}

TEST_CASE("full-grid n = 2 smoke") {
    // all 8 coordinates active at the smallest admissible resolution
    std::vector<int> active(8);
    for (int c = 0; c < 8; ++c) active[c] = c;
    const SpectralGrid g(2, active, 4);
    CHECK(ma_density(ScalarField(g, 0.0)).max() == doctest::Approx(1.0));
    // one mild harmonic per block, below Nyquist
    const ScalarField phi = ScalarField::sample(g, [](const std::vector<double>& x) {
        return 0.01 * (std::cos(2.0 * M_PI * x[1]) + std::sin(2.0 * M_PI * x[6]));
    });
    const TwoFormField a = del_oneform(del_J(phi));
    const TwoFormField b = del_J_oneform(del(phi));
    const double scale = two_form_field_max(a) + 1e-30;
    CHECK(two_form_sum_max(a, b) / scale < 1e-11);
    CHECK(q_real_defect_max(del_del_J(phi), 997) < 1e-12);
    const ScalarField d = ma_density(phi);
    CHECK(d.min() > 0.0);
    CHECK(d.mean() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("min relative eigenvalue tracks the density at n = 1") {
    const SpectralGrid g(1, {0}, 32);
    const ScalarField phi = ScalarField::sample(
        g, [](const std::vector<double>& x) { return 0.01 * std::cos(2.0 * M_PI * x[0]); });
    const double margin = min_relative_eigenvalue(phi);
    const ScalarField d = ma_density(phi);
    CHECK(margin == doctest::Approx(d.min()).epsilon(1e-10));
}
