#pragma once

// Exact symbolic verification of the elementary-symmetric wedge identities in
// the normalized simultaneous basis: with Omega = sum_a e_a* ^ J^{-1}(ebar_a*),
// Omega_phi = sum_a phi_a e_a* ^ J^{-1}(ebar_a*), dphi and beta expanded with
// indeterminate coefficients,
//
//   Omega_phi^k ^ Omega^{n-k}            = k!(n-k)!/n! * e_k(phi) * Omega^n
//   dphi ^ dJphi ^ Omega_phi^k ^ Omega^{n-1-k}
//       = k!(n-k-1)!/n! * sum_{|I|=k} ( sum_{j not in I} |a_{2j-1}|^2 + |a_{2j}|^2 ) phi_I * Omega^n
//   dJphi ^ beta ^ Omega_phi^k ^ Omega^{n-1-k}
//       = k!(n-k-1)!/n! * sum_{|I|=k} ( sum_{j not in I} -abar_{2j} b_{2j} - abar_{2j-1} b_{2j-1} ) phi_I * Omega^n
//
// all verified with polynomial coefficients over Gaussian rationals; the
// residual of each identity must be the zero polynomial.

#include "qma/rational.hpp"

#include <string>
#include <vector>

namespace qma {

struct WedgeIdentityReport {
    int n = 0;
    std::vector<Polynomial> power_residuals;     // k = 0..n
    std::vector<Polynomial> gradient_residuals;  // k = 0..n-1
    std::vector<Polynomial> torsion_residuals;   // k = 0..n-1
    bool all_zero = false;

    std::vector<std::string> residual_strings() const;
};

/// Runs the three identity families for quaternionic dimension n (1..3 kept
/// cheap; larger n admissible but factorially more terms).
WedgeIdentityReport verify_wedge_identities(int n);

/// Omega_phi^n / Omega^n = product of the relative eigenvalues.
double relative_eigen_density(const std::vector<double>& phis);

/// |Omega^n ^ Omegabar^n| against dx_0 ^ ... ^ dx_{4n-1}: the recorded volume
/// scale 4^n (n!)^2 of the flat torus (the oriented ratio carries sign (-1)^n).
double volume_scale(int n);

}  // namespace qma
