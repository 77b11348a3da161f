#pragma once

// (2,0)-forms with respect to I as antisymmetric 2n x 2n complex matrices:
// alpha = sum_{i<j} A_ij dz_i ^ dz_j.  Here live the standard HKT form Omega,
// the q-reality involution, the Hermitian pairing Z -> alpha(Z, Z̄J) and the
// q-positivity test.

#include "qma/exterior.hpp"
#include "qma/hypercomplex.hpp"

#include <Eigen/Dense>

namespace qma {

class TwoFormQ {
public:
    TwoFormQ() = default;
    /// Validates antisymmetry: ||A + A^T|| <= tol * (1 + ||A||), entrywise max.
    static TwoFormQ from_matrix(const Eigen::MatrixXcd& A, double tol = 1e-12);
    /// Antisymmetrizes the input: (A - A^T)/2.
    static TwoFormQ antisymmetrize(const Eigen::MatrixXcd& A);

    const Eigen::MatrixXcd& matrix() const { return A_; }
    int holo_dim() const { return static_cast<int>(A_.rows()); }

    Complex operator()(const ComplexTangentVector& v, const ComplexTangentVector& w) const {
        return (v.transpose() * A_ * w)(0, 0);
    }

    friend TwoFormQ operator+(const TwoFormQ& a, const TwoFormQ& b) {
        return TwoFormQ(a.A_ + b.A_);
    }
    friend TwoFormQ operator-(const TwoFormQ& a, const TwoFormQ& b) {
        return TwoFormQ(a.A_ - b.A_);
    }
    friend TwoFormQ operator*(const Complex& s, const TwoFormQ& a) { return TwoFormQ(s * a.A_); }

private:
    explicit TwoFormQ(Eigen::MatrixXcd A) : A_(std::move(A)) {}
    Eigen::MatrixXcd A_;
};

/// Omega = sum_a dz_{2a} ^ dz_{2a+1}; its matrix S has S[2a][2a+1] = +1.
Eigen::MatrixXcd standard_omega_matrix(int n);
TwoFormQ standard_omega(const HypercomplexFrame& frame);

/// The involution alpha -> conj(J alpha) on (2,0)-forms; fixed points are q-real.
Eigen::MatrixXcd q_real_involution(const Eigen::MatrixXcd& A);

/// max-entry distance of alpha from its q-real reflection.
double q_real_defect(const TwoFormQ& alpha);

bool is_q_real(const HypercomplexFrame& frame, const TwoFormQ& alpha, double tol = 1e-10);

/// Hermitian matrix P of the pairing Z -> alpha(Z, Z̄J): quadratic form c* P c
/// on (1,0) components.  P = -S A; Hermitian exactly when alpha is q-real.
Eigen::MatrixXcd pairing_matrix(const TwoFormQ& alpha);

/// Eigenvalues of the (Hermitianized) pairing matrix, ascending.
Eigen::VectorXd pairing_eigenvalues(const TwoFormQ& alpha);

/// q-real with the pairing positive semidefinite up to -tol*(1 + max eigenvalue).
/// Throws if alpha is not q-real.
bool is_q_positive(const HypercomplexFrame& frame, const TwoFormQ& alpha, double tol = 1e-10);

/// Pfaffian of an antisymmetric matrix by recursive expansion (2n <= 8).
/// alpha^n = n! Pf(A) dz_0 ^ ... ^ dz_{2n-1}, so Pf is the exterior top ratio
/// against the standard volume basis.
Complex pfaffian(const Eigen::MatrixXcd& A);

/// Top-degree ratio (x ^ y) / Omega^n of two 2-forms when n = holo_dim/2 = 2,
/// and the general mixed wedge ratio rho(prod of given 2-forms) / Omega^n.
Complex wedge_top_ratio(const std::vector<Eigen::MatrixXcd>& factors, int n);

/// Signed generator permutations for the full 4n-generator index space
/// (0..2n-1 = dz, 2n..4n-1 = dzbar): the left J action and conjugation.
std::vector<std::pair<int, int>> j_generator_permutation(int n);
std::vector<std::pair<int, int>> conj_generator_permutation(int n);

/// Complex-linear left action of J on a general form over the 4n generators.
template <class S>
Form<S> j_on_form(const HypercomplexFrame& frame, const Form<S>& f) {
    return f.mapped(j_generator_permutation(frame.n()), [](const S& c) { return c; });
}

/// Conjugate of a form: coefficients conjugate through conj_op, dz <-> dzbar.
template <class S, class ConjOp>
Form<S> conj_form(int n, const Form<S>& f, ConjOp conj_op) {
    return f.mapped(conj_generator_permutation(n), conj_op);
}

/// Standard HKT form as a generic form over the 4n generators.
template <class S>
Form<S> standard_omega_form(int n) {
    Form<S> w(4 * n);
    for (int a = 0; a < n; ++a)
        w.add_term((Mask{1} << (2 * a)) | (Mask{1} << (2 * a + 1)), S{1});
    return w;
}

}  // namespace qma
