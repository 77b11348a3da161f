#pragma once

// Flat hypercomplex structure on H^n: the right actions of i, j, k on the real
// tangent model R^{4n} and the induced complexified (1,0)/(0,1) split with
// respect to I.
//
// Conventions (fixed once, validated by tests):
//   * tangent vectors are rows; a right action X sends v to v * X_matrix, so
//     the composition I∘J∘K means the matrix product M_I * M_J * M_K;
//   * quaternionic coordinate a occupies real coordinates 4a..4a+3 with
//     q_a = x_{4a} + i x_{4a+1} + j x_{4a+2} + k x_{4a+3};
//   * holomorphic coordinates of block a (indices h = 2a, 2a+1):
//       z_{2a}   = x_{4a}   + i x_{4a+1}
//       z_{2a+1} = x_{4a+2} - i x_{4a+3}
//     The conjugate on the second member is what makes both coordinates
//     (1,0) for the right action of i.

#include <Eigen/Dense>
#include <complex>
#include <cstdint>

namespace qma {

using Complex = std::complex<double>;

/// Component vector of a (1,0) tangent vector in the z-coordinate basis.
using ComplexTangentVector = Eigen::VectorXcd;

/// Integer matrices of the right actions I, J, K on R^{4n} (row convention).
class HypercomplexFrame {
public:
    explicit HypercomplexFrame(int n);

    int n() const { return n_; }
    int real_dim() const { return 4 * n_; }
    int holo_dim() const { return 2 * n_; }

    const Eigen::MatrixXi& I() const { return I_; }
    const Eigen::MatrixXi& J() const { return J_; }
    const Eigen::MatrixXi& K() const { return K_; }

    /// Rows are the real-model components of Z_0..Z_{2n-1} (the (1,0) basis).
    const Eigen::MatrixXcd& holo_basis() const { return holo_; }

private:
    int n_;
    Eigen::MatrixXi I_, J_, K_;
    Eigen::MatrixXcd holo_;
};

HypercomplexFrame standard_frame(int n);

/// Image of dz_h under J as a signed conjugate covector: J dz_h = sign * dzbar_{index}.
struct CovectorImage {
    int index;
    int sign;
};

/// J dz_{2a} = -dzbar_{2a+1},  J dz_{2a+1} = +dzbar_{2a}.
CovectorImage j_covector_holo(int h);
/// J dzbar_{2a} = -dz_{2a+1},  J dzbar_{2a+1} = +dz_{2a} (also J^{-1} up to sign).
CovectorImage j_covector_anti(int h);
/// J^{-1} dzbar_{2a} = +dz_{2a+1},  J^{-1} dzbar_{2a+1} = -dz_{2a}.
CovectorImage jinv_covector_anti(int h);

/// v·J for a (1,0) vector v, returned as components in the conjugate basis.
ComplexTangentVector j_on_vector(const HypercomplexFrame& frame, const ComplexTangentVector& v);

/// The quaternionic companion sigma(v) = (v̄)·J, an antilinear map on (1,0)
/// vectors with sigma^2 = -id.
ComplexTangentVector j_companion(const HypercomplexFrame& frame, const ComplexTangentVector& v);

}  // namespace qma
