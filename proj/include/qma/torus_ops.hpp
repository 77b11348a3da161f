#pragma once

// The operators d, dbar, dJ = J^{-1} dbar J on scalar and 1-form fields over
// the discrete torus, the q-real (2,0)-form field d dJ phi, the Monge-Ampere
// density and the gradient-energy integrals.

#include "qma/grid.hpp"
#include "qma/hypercomplex.hpp"

#include <Eigen/Dense>

namespace qma {

/// Coefficients of a (1,0) form (holo = true) or (0,1) form in the dz / dzbar
/// basis; component h lives at comp[h * num_points + idx].
struct OneFormField {
    SpectralGrid grid;
    bool holo = true;
    std::vector<std::complex<double>> comp;

    std::complex<double> at(int h, std::size_t idx) const {
        return comp[static_cast<std::size_t>(h) * grid.num_points() + idx];
    }
};

/// Field of (2,0) forms: per point the strictly-upper entries of the
/// antisymmetric coefficient matrix, entry (i,j), i<j, in slot order.
class TwoFormField {
public:
    TwoFormField() = default;
    TwoFormField(const SpectralGrid& grid, int holo_dim);

    const SpectralGrid& grid() const { return grid_; }
    int holo_dim() const { return m_; }

    std::complex<double>& upper(int i, int j, std::size_t idx);
    std::complex<double> upper(int i, int j, std::size_t idx) const;

    /// Full antisymmetric matrix at a grid point.
    Eigen::MatrixXcd matrix_at(std::size_t idx) const;

private:
    int slot(int i, int j) const;
    SpectralGrid grid_;
    int m_ = 0;
    std::vector<std::complex<double>> a_;
};

OneFormField del(const ScalarField& f);
OneFormField del_bar(const ScalarField& f);
OneFormField del_J(const ScalarField& f);

/// d of a (1,0)-form field (a (2,0)-form field).
TwoFormField del_oneform(const OneFormField& w);
/// dJ of a (1,0)-form field.
TwoFormField del_J_oneform(const OneFormField& w);

/// d dJ phi, q-real at every point.
TwoFormField del_del_J(const ScalarField& phi);

/// Omega + d dJ phi.
TwoFormField hkt_form_of(const ScalarField& phi);

/// (Omega + d dJ phi)^n / Omega^n by exterior expansion (Pfaffian of the
/// coefficient matrix).
ScalarField ma_density(const ScalarField& phi);
/// Same density through simultaneous diagonalization against Omega: the
/// product of the relative eigenvalues.
ScalarField ma_density_eigen(const ScalarField& phi);

/// Smallest relative eigenvalue of Omega_phi against Omega over the grid
/// (q-positivity margin).
double min_relative_eigenvalue(const ScalarField& phi);

/// n * Int dphi ^ dJ phi ^ Omega^{n-1} ^ Omegabar^n (as a multiple of the
/// volume element); equals the direct computation Int |del u|_g^2.
double gradient_energy(const ScalarField& u);
double gradient_energy_direct(const ScalarField& u);

/// Per-point top-ratios shared by the estimate machinery:
///   rho[k][idx]  = (Omega_phi^k ^ Omega^{n-k}) / Omega^n,        k = 0..n
///   grad[k][idx] = (dphi ^ dJphi ^ Omega_phi^k ^ Omega^{n-1-k}) / Omega^n, k = 0..n-1
struct WedgeProfiles {
    std::vector<std::vector<double>> rho;
    std::vector<std::vector<double>> grad;
};
WedgeProfiles wedge_profiles(const ScalarField& phi);

/// Fast top ratio (X ^ Y) / Omega^2 for n = 2 two-forms; n = 1 uses X alone.
std::complex<double> two_form_pair_top_ratio(const Eigen::MatrixXcd& X, const Eigen::MatrixXcd& Y);

/// max over sampled points of the q-real defect of a (2,0)-form field.
double q_real_defect_max(const TwoFormField& field, std::size_t sample_stride = 1);

}  // namespace qma
