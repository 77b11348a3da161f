#include "qma/wedge_identities.hpp"

#include "qma/exterior.hpp"
#include "qma/rational.hpp"
#include "qma/two_form.hpp"

#include <doctest.h>

using namespace qma;

TEST_CASE("identity families have zero residual polynomials for n = 1, 2, 3") {
    for (int n : {1, 2, 3}) {
        const WedgeIdentityReport rep = verify_wedge_identities(n);
        CHECK(rep.all_zero);
        CHECK(rep.power_residuals.size() == static_cast<std::size_t>(n + 1));
        CHECK(rep.gradient_residuals.size() == static_cast<std::size_t>(n));
        CHECK(rep.torsion_residuals.size() == static_cast<std::size_t>(n));
        for (const std::string& s : rep.residual_strings()) CHECK(s == "0");
    }
}

TEST_CASE("numeric instance of the power identity: n = 2, phi = (2, 3)") {
    // Omega_phi ^ Omega = 1/2 (phi_1 + phi_2) Omega^2 = (5/2) Omega^2
    using GR = GaussianRational;
    Form<GR> omega(4), omega_phi(4);
    omega.add_term(0b0011, GR(1));
    omega.add_term(0b1100, GR(1));
    omega_phi.add_term(0b0011, GR(2));
    omega_phi.add_term(0b1100, GR(3));
    const Form<GR> lhs = wedge(omega_phi, omega);
    const Form<GR> omega_sq = wedge(omega, omega);
    const Form<GR> rhs = GR(mpq_class(5, 2)) * omega_sq;
    CHECK((lhs - rhs).is_zero());
}

TEST_CASE("n = 1 power identity at k = 0 has unit coefficient") {
    const WedgeIdentityReport rep = verify_wedge_identities(1);
    CHECK(rep.power_residuals[0].is_zero());
    // Omega^1 top coefficient is 1! = 1 by construction of the basis
    Form<GaussianRational> omega(2);
    omega.add_term(0b11, GaussianRational(1));
    CHECK(omega.coefficient(0b11) == GaussianRational(1));
}

TEST_CASE("volume scale against the exact real-coordinate expansion") {
    // Substitute dz = dx +/- i dy into Omega^n ^ Omegabar^n and compare with
    // (-1)^n 4^n (n!)^2 dx_0 ... dx_{4n-1}.
    using GR = GaussianRational;
    for (int n : {1, 2}) {
        const int gens = 4 * n;  // real covectors dx_0..dx_{4n-1}
        // images of dz_h and dzbar_h in the dx basis
        std::vector<Form<GR>> dz(2 * n, Form<GR>(gens)), dzbar(2 * n, Form<GR>(gens));
        for (int a = 0; a < n; ++a) {
            {
                Form<GR> f(gens);
                f.add_term(Mask{1} << (4 * a), GR(1));
                f.add_term(Mask{1} << (4 * a + 1), GR::i());
                dz[2 * a] = f;
            }
            {
                Form<GR> f(gens);
                f.add_term(Mask{1} << (4 * a + 2), GR(1));
                f.add_term(Mask{1} << (4 * a + 3), GR(0) - GR::i());
                dz[2 * a + 1] = f;
            }
            for (int p = 0; p < 2; ++p) {
                Form<GR> f(gens);
                const int h = 2 * a + p;
                for (const auto& [m, c] : dz[h].terms()) f.add_term(m, c.conj());
                dzbar[h] = f;
            }
        }
        Form<GR> omega(gens), omega_bar(gens);
        {
            Form<GR> acc(gens);
            acc.add_term(0, GR(1));
            omega = Form<GR>(gens);
            for (int a = 0; a < n; ++a) omega = omega + wedge(dz[2 * a], dz[2 * a + 1]);
            omega_bar = Form<GR>(gens);
            for (int a = 0; a < n; ++a)
                omega_bar = omega_bar + wedge(dzbar[2 * a], dzbar[2 * a + 1]);
        }
        Form<GR> top(gens);
        top.add_term(0, GR(1));
        for (int i = 0; i < n; ++i) top = wedge(top, omega);
        for (int i = 0; i < n; ++i) top = wedge(top, omega_bar);
        const Mask full = (Mask{1} << gens) - 1;
        const GR coeff = top.coefficient(full);
        // oriented ratio: (-1)^n * volume_scale
        mpq_class expect(static_cast<long>(volume_scale(n)));
        if (n % 2 == 1) expect = -expect;
        CHECK(coeff == GR(expect));
    }
}

TEST_CASE("rejects nonpositive dimension") {
    CHECK_THROWS_AS((void)verify_wedge_identities(0), std::invalid_argument);
}
