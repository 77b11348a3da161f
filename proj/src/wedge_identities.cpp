#include "qma/wedge_identities.hpp"

#include "qma/exterior.hpp"

#include <stdexcept>

namespace qma {

namespace {

// Variable ids: phi_a -> a (a = 0..n-1); 1-based coefficient indices j = 1..2n:
// a_j -> n + j - 1, abar_j -> 3n + j - 1, b_j -> 5n + j - 1, bbar_j -> 7n + j - 1.
struct VarTable {
    int n;
    int phi(int a) const { return a; }
    int a(int j) const { return n + j - 1; }
    int abar(int j) const { return 3 * n + j - 1; }
    int b(int j) const { return 5 * n + j - 1; }
    int bbar(int j) const { return 7 * n + j - 1; }

    std::string name(int id) const {
        if (id < n) return "phi" + std::to_string(id + 1);
        if (id < 3 * n) return "a" + std::to_string(id - n + 1);
        if (id < 5 * n) return "abar" + std::to_string(id - 3 * n + 1);
        if (id < 7 * n) return "b" + std::to_string(id - 5 * n + 1);
        return "bbar" + std::to_string(id - 7 * n + 1);
    }
};

using PForm = Form<Polynomial>;

mpq_class factorial(int k) {
    mpq_class f = 1;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

PForm omega_form(int n, const VarTable& vt, bool weighted) {
    PForm w(2 * n);
    for (int a = 0; a < n; ++a) {
        Mask m = (Mask{1} << (2 * a)) | (Mask{1} << (2 * a + 1));
        w.add_term(m, weighted ? Polynomial::variable(vt.phi(a)) : Polynomial(1));
    }
    return w;
}

PForm one_form(int n, const std::vector<Polynomial>& coeffs) {
    PForm w(2 * n);
    for (int g = 0; g < 2 * n; ++g) {
        if (!coeffs[g].is_zero()) w.add_term(Mask{1} << g, coeffs[g]);
    }
    return w;
}

// e_k over the subset products, with an inner per-subset weight factory.
template <class InnerFn>
Polynomial symmetric_sum(int n, int k, InnerFn inner) {
    Polynomial total;
    std::vector<int> idx(k);
    // enumerate strictly increasing subsets of {0..n-1} of size k
    std::vector<int> comb(k);
    for (int i = 0; i < k; ++i) comb[i] = i;
    while (true) {
        Polynomial term = inner(comb);
        for (int i : comb) term = term * Polynomial::variable(i);
        total = total + term;
        // next combination
        int pos = k - 1;
        while (pos >= 0 && comb[pos] == n - k + pos) --pos;
        if (pos < 0) break;
        ++comb[pos];
        for (int i = pos + 1; i < k; ++i) comb[i] = comb[i - 1] + 1;
    }
    return total;
}

Polynomial top_coefficient(const PForm& f, int n) {
    const Mask full = (Mask{1} << (2 * n)) - 1;
    return f.coefficient(full);
}

}  // namespace

std::vector<std::string> WedgeIdentityReport::residual_strings() const {
    VarTable vt{n};
    auto nm = [&vt](int id) { return vt.name(id); };
    std::vector<std::string> out;
    for (const auto& p : power_residuals) out.push_back(p.str(nm));
    for (const auto& p : gradient_residuals) out.push_back(p.str(nm));
    for (const auto& p : torsion_residuals) out.push_back(p.str(nm));
    return out;
}

WedgeIdentityReport verify_wedge_identities(int n) {
    if (n < 1) throw std::invalid_argument("verify_wedge_identities: n >= 1 required");
    const VarTable vt{n};
    WedgeIdentityReport rep;
    rep.n = n;

    const PForm omega = omega_form(n, vt, false);
    const PForm omega_phi = omega_form(n, vt, true);
    const mpq_class n_fact = factorial(n);
    const Polynomial omega_top = top_coefficient(pow_wedge(omega, n), n);  // = n!

    // dphi = sum_j a_j dz_{j-1};   dJphi = sum_a ( -abar_{2a+2} dz_{2a} + abar_{2a+1} dz_{2a+1} );
    // beta = sum_j b_j dz_{j-1}.
    std::vector<Polynomial> dphi_c(2 * n), djphi_c(2 * n), beta_c(2 * n);
    for (int g = 0; g < 2 * n; ++g) {
        dphi_c[g] = Polynomial::variable(vt.a(g + 1));
        beta_c[g] = Polynomial::variable(vt.b(g + 1));
    }
    for (int a = 0; a < n; ++a) {
        djphi_c[2 * a] = -Polynomial::variable(vt.abar(2 * a + 2));
        djphi_c[2 * a + 1] = Polynomial::variable(vt.abar(2 * a + 1));
    }
    const PForm dphi = one_form(n, dphi_c);
    const PForm djphi = one_form(n, djphi_c);
    const PForm beta = one_form(n, beta_c);

    for (int k = 0; k <= n; ++k) {
        const PForm lhs = wedge(pow_wedge(omega_phi, k), pow_wedge(omega, n - k));
        const mpq_class pref = factorial(k) * factorial(n - k) / n_fact;
        Polynomial ek = symmetric_sum(n, k, [](const std::vector<int>&) { return Polynomial(1); });
        Polynomial rhs = Polynomial(GaussianRational(pref)) * ek * omega_top;
        rep.power_residuals.push_back(top_coefficient(lhs, n) - rhs);
    }

    for (int k = 0; k <= n - 1; ++k) {
        const PForm tail = wedge(pow_wedge(omega_phi, k), pow_wedge(omega, n - 1 - k));
        const mpq_class pref = factorial(k) * factorial(n - k - 1) / n_fact;

        const PForm grad_lhs = wedge(wedge(dphi, djphi), tail);
        Polynomial grad_inner = symmetric_sum(n, k, [&](const std::vector<int>& comb) {
            Polynomial s;
            for (int j = 1; j <= n; ++j) {
                bool in = false;
                for (int c : comb)
                    if (c == j - 1) in = true;
                if (in) continue;
                s = s + Polynomial::variable(vt.a(2 * j - 1)) *
                            Polynomial::variable(vt.abar(2 * j - 1));
                s = s + Polynomial::variable(vt.a(2 * j)) * Polynomial::variable(vt.abar(2 * j));
            }
            return s;
        });
        Polynomial grad_rhs = Polynomial(GaussianRational(pref)) * grad_inner * omega_top;
        rep.gradient_residuals.push_back(top_coefficient(grad_lhs, n) - grad_rhs);

        const PForm tor_lhs = wedge(wedge(djphi, beta), tail);
        Polynomial tor_inner = symmetric_sum(n, k, [&](const std::vector<int>& comb) {
            Polynomial s;
            for (int j = 1; j <= n; ++j) {
                bool in = false;
                for (int c : comb)
                    if (c == j - 1) in = true;
                if (in) continue;
                s = s - Polynomial::variable(vt.abar(2 * j)) * Polynomial::variable(vt.b(2 * j));
                s = s - Polynomial::variable(vt.abar(2 * j - 1)) *
                            Polynomial::variable(vt.b(2 * j - 1));
            }
            return s;
        });
        Polynomial tor_rhs = Polynomial(GaussianRational(pref)) * tor_inner * omega_top;
        rep.torsion_residuals.push_back(top_coefficient(tor_lhs, n) - tor_rhs);
    }

    rep.all_zero = true;
    for (const auto& p : rep.power_residuals) rep.all_zero = rep.all_zero && p.is_zero();
    for (const auto& p : rep.gradient_residuals) rep.all_zero = rep.all_zero && p.is_zero();
    for (const auto& p : rep.torsion_residuals) rep.all_zero = rep.all_zero && p.is_zero();
    return rep;
}

double relative_eigen_density(const std::vector<double>& phis) {
    double prod = 1.0;
    for (double p : phis) prod *= p;
    return prod;
}

double volume_scale(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    double p4 = 1.0;
    for (int i = 0; i < n; ++i) p4 *= 4.0;
    return p4 * f * f;
}

}  // namespace qma
