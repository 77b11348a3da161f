#pragma once

// Constructive simultaneous diagonalization of a strictly q-positive (2,0)
// form Omega_1 against a q-real Omega_2, following the inductive eigenvector
// argument: build the endomorphism tilde-Omega_2 of T^{1,0} defined by
// Omega_2(v,.) = Omega_1(tilde(v),.), then repeatedly take an eigenvector of
// its restriction to V' = intersection of the Omega_1-kernels of the vectors
// chosen so far, pairing each e_i with its companion (ebar_i)J.

#include "qma/hypercomplex.hpp"
#include "qma/two_form.hpp"

#include <Eigen/Dense>
#include <random>
#include <vector>

namespace qma {

struct DiagonalizationResult {
    // columns of `basis` are e_1..e_n in (1,0) components; companions derive
    // via the antilinear sigma = j_companion.
    Eigen::MatrixXcd basis;
    Eigen::VectorXcd eigenvalues;
    // max violation of the four orthogonality families, relative to
    // ||Omega_1||_F + ||Omega_2||_F
    double residual = 0.0;
};

struct SimDiagOptions {
    double positivity_tol = 1e-10;
    double breakdown_tol = 1e-6;
    bool enforce_positivity = true;  // tests may disable this to observe the
                                     // indefinite-pair breakdown
};

/// Omega_1-orthonormal basis v_1..v_n (columns), i.e. Omega_1(v_i, sigma v_j) =
/// delta_ij and all other pairings vanish.  Quaternionic Gram-Schmidt in the
/// Hermitian product H(v,w) = Omega_1(v, sigma w); requires strict positivity
/// unless opts.enforce_positivity is off (then signs are carried and the
/// output is only H-orthogonal up to sign).
Eigen::MatrixXcd omega_orthonormal_basis(const HypercomplexFrame& frame, const TwoFormQ& omega1,
                                         const SimDiagOptions& opts = {});

/// Matrix of tilde-Omega_2 on (1,0) components, built from the explicit
/// expansion tilde(v) = sum_i ( Omega_2(v, sigma v_i) v_i - Omega_2(v, v_i) sigma v_i )
/// in an Omega_1-orthonormal basis.
Eigen::MatrixXcd build_omega_tilde(const HypercomplexFrame& frame, const TwoFormQ& omega1,
                                   const TwoFormQ& omega2, const SimDiagOptions& opts = {});

/// || tilde(sigma v) - sigma(tilde v) || / (1 + ||tilde|| ||v||): the
/// conjugation-equivariance defect, zero for q-real Omega_2.
double conj_equivariance_residual(const HypercomplexFrame& frame, const TwoFormQ& omega1,
                                  const TwoFormQ& omega2, const ComplexTangentVector& v);

DiagonalizationResult simultaneous_diagonalize(const HypercomplexFrame& frame,
                                               const TwoFormQ& omega1, const TwoFormQ& omega2,
                                               const SimDiagOptions& opts = {});

/// Rescales e_i so that Omega_1(e_i, sigma e_i) = 1; the Omega_2 pairings then
/// are the relative eigenvalues phi_i.
struct NormalizedDiagonalization {
    Eigen::MatrixXcd basis;
    Eigen::VectorXcd relative_eigenvalues;
};
NormalizedDiagonalization normalize_to_standard(const HypercomplexFrame& frame,
                                                const DiagonalizationResult& result,
                                                const TwoFormQ& omega1, const TwoFormQ& omega2);

/// Both sides of the final coefficient inequality behind the pointwise bound
/// |dJphi ^ beta ^ Omega_phi^k ^ Omega^{n-1-k}| <= (B/eps) |dphi ^ dJphi ...| + B eps (...):
///   lhs = sum_{|I|=k} ( sum_{j not in I} |a_2j||b_2j| + |a_{2j-1}||b_{2j-1}| ) phi_I
///   rhs = B eps (n-k) e_k(phi) + (B/eps) sum_{|I|=k} ( sum_{j not in I} |a_{2j-1}|^2 + |a_2j|^2 ) phi_I
struct PointwiseCoefficients {
    std::vector<Complex> a;  // 2n entries, 1-based coefficient index j = position + 1
    std::vector<Complex> b;  // 2n entries
    std::vector<double> phis;  // n entries, >= 0
};
struct CoefficientBoundSides {
    double lhs = 0.0;
    double rhs = 0.0;
};
CoefficientBoundSides pointwise_coefficient_bound(const PointwiseCoefficients& coeffs, int k,
                                                  double eps, double B);

/// Random q-real (2,0)-form with O(1) entries.
TwoFormQ random_q_real(std::mt19937_64& rng, int n);
/// Random strictly q-positive form: a random q-real form shifted along Omega
/// until its smallest pairing eigenvalue is at least `margin`.
TwoFormQ random_strictly_q_positive(std::mt19937_64& rng, int n, double margin = 0.5);
Eigen::VectorXcd random_complex_vector(std::mt19937_64& rng, int dim);

}  // namespace qma
