#include "qma/two_form.hpp"

#include "qma/exterior.hpp"

#include <stdexcept>
#include <vector>

namespace qma {

namespace {

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TwoFormQ TwoFormQ::from_matrix(const Eigen::MatrixXcd& A, double tol) {
    if (A.rows() != A.cols() || A.rows() % 2 != 0)
        throw std::invalid_argument("TwoFormQ: matrix must be 2n x 2n");
    const double defect = max_abs(A + A.transpose());
    if (defect > tol * (1.0 + max_abs(A)))
        throw std::invalid_argument("TwoFormQ: matrix is not antisymmetric");
    return TwoFormQ((A - A.transpose().eval()) / 2.0);
}

TwoFormQ TwoFormQ::antisymmetrize(const Eigen::MatrixXcd& A) {
    if (A.rows() != A.cols() || A.rows() % 2 != 0)
        throw std::invalid_argument("TwoFormQ: matrix must be 2n x 2n");
    return TwoFormQ((A - A.transpose().eval()) / 2.0);
}

Eigen::MatrixXcd standard_omega_matrix(int n) {
    Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
    for (int a = 0; a < n; ++a) {
        S(2 * a, 2 * a + 1) = 1.0;
        S(2 * a + 1, 2 * a) = -1.0;
    }
    return S;
}

TwoFormQ standard_omega(const HypercomplexFrame& frame) {
    return TwoFormQ::from_matrix(standard_omega_matrix(frame.n()));
}

Eigen::MatrixXcd q_real_involution(const Eigen::MatrixXcd& A) {
    const int n = static_cast<int>(A.rows()) / 2;
    const Eigen::MatrixXcd S = standard_omega_matrix(n);
    return S.transpose() * A.conjugate() * S;
}

double q_real_defect(const TwoFormQ& alpha) {
    return max_abs(q_real_involution(alpha.matrix()) - alpha.matrix());
}

bool is_q_real(const HypercomplexFrame&, const TwoFormQ& alpha, double tol) {
    return q_real_defect(alpha) <= tol * (1.0 + max_abs(alpha.matrix()));
}

Eigen::MatrixXcd pairing_matrix(const TwoFormQ& alpha) {
    const int n = alpha.holo_dim() / 2;
    return -standard_omega_matrix(n) * alpha.matrix();
}

Eigen::VectorXd pairing_eigenvalues(const TwoFormQ& alpha) {
    const Eigen::MatrixXcd P = pairing_matrix(alpha);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es((P + P.adjoint()) / 2.0);
    return es.eigenvalues();
}

bool is_q_positive(const HypercomplexFrame& frame, const TwoFormQ& alpha, double tol) {
    if (!is_q_real(frame, alpha, 1e-8))
        throw std::invalid_argument("is_q_positive: form is not q-real");
    const Eigen::VectorXd ev = pairing_eigenvalues(alpha);
    const double top = ev(ev.size() - 1);
    return ev(0) >= -tol * (1.0 + std::abs(top));
}

Complex pfaffian(const Eigen::MatrixXcd& A) {
    const int m = static_cast<int>(A.rows());
    if (m == 0) return 1.0;
    if (m % 2 != 0) return 0.0;
    if (m == 2) return A(0, 1);
    // expand along row 0: Pf(A) = sum_j (-1)^j A_{0,j} Pf(A with rows/cols 0,j removed)
    Complex acc = 0.0;
    for (int j = 1; j < m; ++j) {
        if (A(0, j) == Complex(0.0)) continue;
        Eigen::MatrixXcd sub(m - 2, m - 2);
        int rr = 0;
        for (int r = 1; r < m; ++r) {
            if (r == j) continue;
            int cc = 0;
            for (int c = 1; c < m; ++c) {
                if (c == j) continue;
                sub(rr, cc++) = A(r, c);
            }
            ++rr;
        }
        const double sgn = (j % 2 == 1) ? 1.0 : -1.0;
        acc += sgn * A(0, j) * pfaffian(sub);
    }
    return acc;
}

std::vector<std::pair<int, int>> j_generator_permutation(int n) {
    // J dz_{2a} = -dzbar_{2a+1}, J dz_{2a+1} = +dzbar_{2a} and the matching
    // action on the conjugate generators.
    std::vector<std::pair<int, int>> perm(4 * n);
    for (int h = 0; h < 2 * n; ++h) {
        const CovectorImage holo = j_covector_holo(h);
        perm[h] = {2 * n + holo.index, holo.sign};
        const CovectorImage anti = j_covector_anti(h);
        perm[2 * n + h] = {anti.index, anti.sign};
    }
    return perm;
}

std::vector<std::pair<int, int>> conj_generator_permutation(int n) {
    std::vector<std::pair<int, int>> perm(4 * n);
    for (int h = 0; h < 2 * n; ++h) {
        perm[h] = {2 * n + h, 1};
        perm[2 * n + h] = {h, 1};
    }
    return perm;
}

Complex wedge_top_ratio(const std::vector<Eigen::MatrixXcd>& factors, int n) {
    const int gens = 2 * n;
    Form<Complex> prod(gens);
    prod.add_term(0, 1.0);
    for (const auto& A : factors) {
        Form<Complex> f(gens);
        for (int i = 0; i < gens; ++i)
            for (int j = i + 1; j < gens; ++j)
                if (A(i, j) != Complex(0.0)) f.add_term((Mask{1} << i) | (Mask{1} << j), A(i, j));
        prod = wedge(prod, f);
    }
    double fact = 1.0;
    for (int i = 2; i <= n; ++i) fact *= i;
    const Mask full = (gens == 32) ? ~Mask{0} : ((Mask{1} << gens) - 1);
    return prod.coefficient(full) / fact;
}

}  // namespace qma
