#include "qma/torus_ops.hpp"

#include "qma/simdiag.hpp"
#include "qma/two_form.hpp"
#include "qma/wedge_identities.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qma {

namespace {

using Cplx = std::complex<double>;

// z_{2a} = x_{4a} + i x_{4a+1}; z_{2a+1} = x_{4a+2} - i x_{4a+3}.
struct HoloCoord {
    int re_coord;
    int im_coord;
    double im_sign;
};

HoloCoord holo_coord(int h) {
    const int a = h / 2;
    if (h % 2 == 0) return {4 * a, 4 * a + 1, +1.0};
    return {4 * a + 2, 4 * a + 3, -1.0};
}

// Frequency symbol of d/dx_c; zero when inactive.
Cplx coord_symbol(const SpectralGrid& g, int coord, const std::vector<int>& k) {
    const int axis = g.axis_of(coord);
    if (axis < 0) return 0.0;
    return Cplx(0.0, 2.0 * M_PI) * static_cast<double>(k[axis]);
}

// d/dz_h (bar = false) or d/dzbar_h (bar = true).
Cplx holo_symbol(const SpectralGrid& g, int h, bool bar, const std::vector<int>& k) {
    const HoloCoord hc = holo_coord(h);
    const Cplx dre = coord_symbol(g, hc.re_coord, k);
    const Cplx dim = coord_symbol(g, hc.im_coord, k);
    const double s = bar ? hc.im_sign : -hc.im_sign;
    return 0.5 * (dre + Cplx(0.0, s) * dim);
}

bool holo_touches_active(const SpectralGrid& g, int h) {
    const HoloCoord hc = holo_coord(h);
    return g.axis_of(hc.re_coord) >= 0 || g.axis_of(hc.im_coord) >= 0;
}

OneFormField first_order(const ScalarField& f, bool bar) {
    const SpectralGrid& g = f.grid();
    const int m = 2 * g.n;
    OneFormField out{g, !bar, std::vector<Cplx>(static_cast<std::size_t>(m) * g.num_points(), 0.0)};
    const FieldSpectrum spec = analyze(f);
    for (int h = 0; h < m; ++h) {
        if (!holo_touches_active(g, h)) continue;
        const ComplexField d = spec.inverse_with_symbol(
            [&](const std::vector<int>& k) { return holo_symbol(g, h, bar, k); });
        std::copy(d.v.begin(), d.v.end(),
                  out.comp.begin() + static_cast<std::size_t>(h) * g.num_points());
    }
    return out;
}

}  // namespace

TwoFormField::TwoFormField(const SpectralGrid& grid, int holo_dim)
    : grid_(grid),
      m_(holo_dim),
      a_(static_cast<std::size_t>(holo_dim) * (holo_dim - 1) / 2 * grid.num_points(), 0.0) {}

int TwoFormField::slot(int i, int j) const {
    // strictly upper triangle, row-major: (0,1), (0,2), ..., (1,2), ...
    return i * (2 * m_ - i - 1) / 2 + (j - i - 1);
}

std::complex<double>& TwoFormField::upper(int i, int j, std::size_t idx) {
    return a_[static_cast<std::size_t>(slot(i, j)) * grid_.num_points() + idx];
}
std::complex<double> TwoFormField::upper(int i, int j, std::size_t idx) const {
    return a_[static_cast<std::size_t>(slot(i, j)) * grid_.num_points() + idx];
}

Eigen::MatrixXcd TwoFormField::matrix_at(std::size_t idx) const {
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(m_, m_);
    for (int i = 0; i < m_; ++i) {
        for (int j = i + 1; j < m_; ++j) {
            A(i, j) = upper(i, j, idx);
            A(j, i) = -A(i, j);
        }
    }
    return A;
}

OneFormField del(const ScalarField& f) { return first_order(f, false); }
OneFormField del_bar(const ScalarField& f) { return first_order(f, true); }

OneFormField del_J(const ScalarField& f) {
    // dJ f = sum_a [ (df/dzbar_{2a}) dz_{2a+1} - (df/dzbar_{2a+1}) dz_{2a} ]
    const OneFormField db = del_bar(f);
    const SpectralGrid& g = f.grid();
    const std::size_t npts = g.num_points();
    OneFormField out{g, true, std::vector<Cplx>(db.comp.size(), 0.0)};
    for (int a = 0; a < g.n; ++a) {
        const std::size_t lo = static_cast<std::size_t>(2 * a) * npts;
        const std::size_t hi = static_cast<std::size_t>(2 * a + 1) * npts;
        for (std::size_t i = 0; i < npts; ++i) {
            out.comp[hi + i] = db.comp[lo + i];
            out.comp[lo + i] = -db.comp[hi + i];
        }
    }
    return out;
}

TwoFormField del_oneform(const OneFormField& w) {
    if (!w.holo) throw std::invalid_argument("del_oneform: expects a (1,0)-form field");
    const SpectralGrid& g = w.grid;
    const int m = 2 * g.n;
    const std::size_t npts = g.num_points();
    TwoFormField out(g, m);
    // (dw)_{gh} = dw_h/dz_g - dw_g/dz_h for g < h
    std::vector<ComplexField> dcomp(static_cast<std::size_t>(m) * m);
    for (int h = 0; h < m; ++h) {
        ComplexField comp{g, std::vector<Cplx>(w.comp.begin() + static_cast<long>(h) * npts,
                                               w.comp.begin() + static_cast<long>(h + 1) * npts)};
        const FieldSpectrum spec = analyze(comp);
        for (int gidx = 0; gidx < m; ++gidx) {
            if (!holo_touches_active(g, gidx)) continue;
            dcomp[static_cast<std::size_t>(gidx) * m + h] = spec.inverse_with_symbol(
                [&](const std::vector<int>& k) { return holo_symbol(g, gidx, false, k); });
        }
    }
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            const auto& dij = dcomp[static_cast<std::size_t>(i) * m + j];  // dw_j/dz_i
            const auto& dji = dcomp[static_cast<std::size_t>(j) * m + i];  // dw_i/dz_j
            for (std::size_t p = 0; p < npts; ++p) {
                Cplx val = 0.0;
                if (!dij.v.empty()) val += dij.v[p];
                if (!dji.v.empty()) val -= dji.v[p];
                out.upper(i, j, p) = val;
            }
        }
    }
    return out;
}

TwoFormField del_J_oneform(const OneFormField& w) {
    if (!w.holo) throw std::invalid_argument("del_J_oneform: expects a (1,0)-form field");
    const SpectralGrid& g = w.grid;
    const int m = 2 * g.n;
    const std::size_t npts = g.num_points();

    // J w = sum_h sign_h w_h dzbar_{b(h)}; coefficients wt on the dzbar basis.
    std::vector<Cplx> wt(static_cast<std::size_t>(m) * npts, 0.0);
    for (int h = 0; h < m; ++h) {
        const CovectorImage im = j_covector_holo(h);
        for (std::size_t p = 0; p < npts; ++p)
            wt[static_cast<std::size_t>(im.index) * npts + p] =
                static_cast<double>(im.sign) * w.comp[static_cast<std::size_t>(h) * npts + p];
    }
    // dbar(Jw) = sum_{r<l} ( dwt_l/dzbar_r - dwt_r/dzbar_l ) dzbar_r ^ dzbar_l
    std::vector<ComplexField> dcomp(static_cast<std::size_t>(m) * m);
    for (int l = 0; l < m; ++l) {
        ComplexField comp{g, std::vector<Cplx>(wt.begin() + static_cast<long>(l) * npts,
                                               wt.begin() + static_cast<long>(l + 1) * npts)};
        const FieldSpectrum spec = analyze(comp);
        for (int r = 0; r < m; ++r) {
            if (!holo_touches_active(g, r)) continue;
            dcomp[static_cast<std::size_t>(r) * m + l] = spec.inverse_with_symbol(
                [&](const std::vector<int>& k) { return holo_symbol(g, r, true, k); });
        }
    }
    // J^{-1}(dzbar_r ^ dzbar_l) = s_r s_l dz_{c(r)} ^ dz_{c(l)}
    TwoFormField out(g, m);
    for (int r = 0; r < m; ++r) {
        for (int l = r + 1; l < m; ++l) {
            const CovectorImage ir = jinv_covector_anti(r);
            const CovectorImage il = jinv_covector_anti(l);
            const double sgn = static_cast<double>(ir.sign * il.sign);
            int ci = ir.index, cj = il.index;
            double flip = 1.0;
            if (ci > cj) {
                std::swap(ci, cj);
                flip = -1.0;
            }
            const auto& drl = dcomp[static_cast<std::size_t>(r) * m + l];
            const auto& dlr = dcomp[static_cast<std::size_t>(l) * m + r];
            for (std::size_t p = 0; p < npts; ++p) {
                Cplx val = 0.0;
                if (!drl.v.empty()) val += drl.v[p];
                if (!dlr.v.empty()) val -= dlr.v[p];
                out.upper(ci, cj, p) += sgn * flip * val;
            }
        }
    }
    return out;
}

TwoFormField del_del_J(const ScalarField& phi) {
    // A = M - M^T with M = G S, G_{hm} = d^2 phi / dz_h dzbar_m.
    const SpectralGrid& g = phi.grid();
    const int m = 2 * g.n;
    const std::size_t npts = g.num_points();
    const FieldSpectrum spec = analyze(phi);

    std::vector<ComplexField> G(static_cast<std::size_t>(m) * m);
    for (int h = 0; h < m; ++h) {
        if (!holo_touches_active(g, h)) continue;
        for (int l = 0; l < m; ++l) {
            if (!holo_touches_active(g, l)) continue;
            G[static_cast<std::size_t>(h) * m + l] =
                spec.inverse_with_symbol([&](const std::vector<int>& k) {
                    return holo_symbol(g, h, false, k) * holo_symbol(g, l, true, k);
                });
        }
    }
    auto g_at = [&](int h, int l, std::size_t p) -> Cplx {
        const auto& f = G[static_cast<std::size_t>(h) * m + l];
        return f.v.empty() ? Cplx(0.0) : f.v[p];
    };
    // (G S)_{h, 2a+1} = G_{h, 2a};  (G S)_{h, 2a} = -G_{h, 2a+1}
    auto gs_at = [&](int h, int l, std::size_t p) -> Cplx {
        return (l % 2 == 1) ? g_at(h, l - 1, p) : -g_at(h, l + 1, p);
    };
    TwoFormField out(g, m);
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            for (std::size_t p = 0; p < npts; ++p)
                out.upper(i, j, p) = gs_at(i, j, p) - gs_at(j, i, p);
    return out;
}

TwoFormField hkt_form_of(const ScalarField& phi) {
    TwoFormField ddj = del_del_J(phi);
    const SpectralGrid& g = phi.grid();
    for (int a = 0; a < g.n; ++a)
        for (std::size_t p = 0; p < g.num_points(); ++p) ddj.upper(2 * a, 2 * a + 1, p) += 1.0;
    return ddj;
}

std::complex<double> two_form_pair_top_ratio(const Eigen::MatrixXcd& X, const Eigen::MatrixXcd& Y) {
    if (X.rows() == 2) return X(0, 1);
    if (X.rows() == 4) {
        return (X(0, 1) * Y(2, 3) + Y(0, 1) * X(2, 3) - X(0, 2) * Y(1, 3) - Y(0, 2) * X(1, 3) +
                X(0, 3) * Y(1, 2) + Y(0, 3) * X(1, 2)) /
               2.0;
    }
    throw std::invalid_argument("two_form_pair_top_ratio: supports n <= 2");
}

ScalarField ma_density(const ScalarField& phi) {
    const TwoFormField omega_phi = hkt_form_of(phi);
    ScalarField out(phi.grid(), 0.0);
    for (std::size_t p = 0; p < out.size(); ++p)
        out[p] = pfaffian(omega_phi.matrix_at(p)).real();
    return out;
}

ScalarField ma_density_eigen(const ScalarField& phi) {
    const SpectralGrid& g = phi.grid();
    const HypercomplexFrame frame = standard_frame(g.n);
    const TwoFormQ omega = standard_omega(frame);
    const TwoFormField omega_phi = hkt_form_of(phi);
    ScalarField out(g, 0.0);
    for (std::size_t p = 0; p < out.size(); ++p) {
        const TwoFormQ w2 = TwoFormQ::from_matrix(omega_phi.matrix_at(p), 1e-9);
        const DiagonalizationResult d = simultaneous_diagonalize(frame, omega, w2);
        const NormalizedDiagonalization nd = normalize_to_standard(frame, d, omega, w2);
        double prod = 1.0;
        for (int i = 0; i < g.n; ++i) prod *= nd.relative_eigenvalues(i).real();
        out[p] = prod;
    }
    return out;
}

double min_relative_eigenvalue(const ScalarField& phi) {
    const TwoFormField omega_phi = hkt_form_of(phi);
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < phi.size(); ++p) {
        const Eigen::VectorXd ev =
            pairing_eigenvalues(TwoFormQ::antisymmetrize(omega_phi.matrix_at(p)));
        m = std::min(m, ev(0));
    }
    return m;
}

namespace {

// per-point (dphi ^ dJphi) coefficient matrix
Eigen::MatrixXcd grad_two_form_at(const OneFormField& dphi, const OneFormField& djphi,
                                  std::size_t p) {
    const int m = 2 * dphi.grid.n;
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            const Cplx v = dphi.at(i, p) * djphi.at(j, p) - dphi.at(j, p) * djphi.at(i, p);
            A(i, j) = v;
            A(j, i) = -v;
        }
    }
    return A;
}

}  // namespace

double gradient_energy(const ScalarField& u) {
    const SpectralGrid& g = u.grid();
    const int n = g.n;
    const OneFormField du = del(u);
    const OneFormField dju = del_J(u);
    const Eigen::MatrixXcd omega_m = standard_omega_matrix(n);
    double acc = 0.0;
    for (std::size_t p = 0; p < u.size(); ++p) {
        const Eigen::MatrixXcd grad = grad_two_form_at(du, dju, p);
        std::vector<Eigen::MatrixXcd> factors{grad};
        for (int k = 0; k < n - 1; ++k) factors.push_back(omega_m);
        acc += wedge_top_ratio(factors, n).real();
    }
    return static_cast<double>(n) * (acc / static_cast<double>(u.size())) * volume_scale(n);
}

double gradient_energy_direct(const ScalarField& u) {
    const SpectralGrid& g = u.grid();
    const OneFormField du = del(u);
    double acc = 0.0;
    for (std::size_t p = 0; p < u.size(); ++p)
        for (int h = 0; h < 2 * g.n; ++h) acc += std::norm(du.at(h, p));
    return (acc / static_cast<double>(u.size())) * volume_scale(g.n);
}

WedgeProfiles wedge_profiles(const ScalarField& phi) {
    const SpectralGrid& g = phi.grid();
    const int n = g.n;
    const std::size_t npts = g.num_points();
    const TwoFormField omega_phi = hkt_form_of(phi);
    const OneFormField dphi = del(phi);
    const OneFormField djphi = del_J(phi);
    const Eigen::MatrixXcd omega_m = standard_omega_matrix(n);

    WedgeProfiles out;
    out.rho.assign(n + 1, std::vector<double>(npts, 0.0));
    out.grad.assign(n, std::vector<double>(npts, 0.0));
    for (std::size_t p = 0; p < npts; ++p) {
        const Eigen::MatrixXcd aphi = omega_phi.matrix_at(p);
        const Eigen::MatrixXcd grad = grad_two_form_at(dphi, djphi, p);
        for (int k = 0; k <= n; ++k) {
            std::vector<Eigen::MatrixXcd> factors;
            for (int i = 0; i < k; ++i) factors.push_back(aphi);
            for (int i = 0; i < n - k; ++i) factors.push_back(omega_m);
            out.rho[k][p] = wedge_top_ratio(factors, n).real();
        }
        for (int k = 0; k <= n - 1; ++k) {
            std::vector<Eigen::MatrixXcd> factors{grad};
            for (int i = 0; i < k; ++i) factors.push_back(aphi);
            for (int i = 0; i < n - 1 - k; ++i) factors.push_back(omega_m);
            out.grad[k][p] = wedge_top_ratio(factors, n).real();
        }
    }
    return out;
}

double q_real_defect_max(const TwoFormField& field, std::size_t sample_stride) {
    double worst = 0.0;
    for (std::size_t p = 0; p < field.grid().num_points(); p += sample_stride) {
        const Eigen::MatrixXcd A = field.matrix_at(p);
        worst = std::max(worst, (q_real_involution(A) - A).cwiseAbs().maxCoeff());
    }
    return worst;
}

}  // namespace qma
