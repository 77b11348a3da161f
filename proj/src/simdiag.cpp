#include "qma/simdiag.hpp"

#include <algorithm>
#include <stdexcept>

namespace qma {

namespace {

Complex pair_eval(const TwoFormQ& w, const Eigen::VectorXcd& v, const Eigen::VectorXcd& u) {
    return (v.transpose() * w.matrix() * u)(0, 0);
}

Eigen::VectorXcd sigma(const HypercomplexFrame& frame, const Eigen::VectorXcd& v) {
    return j_companion(frame, v);
}

double form_scale(const TwoFormQ& a, const TwoFormQ& b) {
    return a.matrix().norm() + b.matrix().norm();
}

}  // namespace

Eigen::MatrixXcd omega_orthonormal_basis(const HypercomplexFrame& frame, const TwoFormQ& omega1,
                                         const SimDiagOptions& opts) {
    const int m = frame.holo_dim();
    const int n = frame.n();
    if (omega1.holo_dim() != m)
        throw std::invalid_argument("omega_orthonormal_basis: dimension mismatch");
    auto herm = [&](const Eigen::VectorXcd& v, const Eigen::VectorXcd& w) {
        return pair_eval(omega1, v, sigma(frame, w));
    };
    const double scale = omega1.matrix().norm() + 1.0;

    Eigen::MatrixXcd basis(m, m);  // columns v_0, sigma v_0, v_1, sigma v_1, ...
    std::vector<double> signs;
    int filled = 0;
    for (int step = 0; step < n; ++step) {
        Eigen::VectorXcd u;
        double best = -1.0;
        // candidate with the largest residual after projecting out the chosen span
        for (int cand = 0; cand < m; ++cand) {
            Eigen::VectorXcd w = Eigen::VectorXcd::Zero(m);
            w(cand) = 1.0;
            for (int c = 0; c < filled; ++c)
                w -= (herm(w, basis.col(c)) / signs[c]) * basis.col(c);
            const double r = w.norm();
            if (r > best) {
                best = r;
                u = w;
            }
        }
        if (best < 1e-8)
            throw std::runtime_error("omega_orthonormal_basis: degenerate pairing");
        // second Gram-Schmidt pass for orthogonality to machine precision
        for (int c = 0; c < filled; ++c) u -= (herm(u, basis.col(c)) / signs[c]) * basis.col(c);
        const Complex huu = herm(u, u);
        if (opts.enforce_positivity && huu.real() <= opts.positivity_tol * scale)
            throw std::runtime_error("omega_orthonormal_basis: Omega_1 is not strictly q-positive");
        const double mag = std::abs(huu.real());
        if (mag < 1e-14 * scale)
            throw std::runtime_error("omega_orthonormal_basis: isotropic vector encountered");
        u /= std::sqrt(mag);
        const double sgn = huu.real() > 0 ? 1.0 : -1.0;
        basis.col(filled) = u;
        signs.push_back(sgn);
        basis.col(filled + 1) = sigma(frame, u);
        signs.push_back(sgn);
        filled += 2;
    }
    return basis;
}

Eigen::MatrixXcd build_omega_tilde(const HypercomplexFrame& frame, const TwoFormQ& omega1,
                                   const TwoFormQ& omega2, const SimDiagOptions& opts) {
    const int m = frame.holo_dim();
    if (omega2.holo_dim() != m) throw std::invalid_argument("build_omega_tilde: dimension mismatch");
    const Eigen::MatrixXcd onb = omega_orthonormal_basis(frame, omega1, opts);

    Eigen::MatrixXcd tilde = Eigen::MatrixXcd::Zero(m, m);
    for (int col = 0; col < m; ++col) {
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(m);
        v(col) = 1.0;
        Eigen::VectorXcd img = Eigen::VectorXcd::Zero(m);
        for (int i = 0; i < frame.n(); ++i) {
            const Eigen::VectorXcd vi = onb.col(2 * i);
            const Eigen::VectorXcd svi = onb.col(2 * i + 1);
            img += pair_eval(omega2, v, svi) * vi - pair_eval(omega2, v, vi) * svi;
        }
        tilde.col(col) = img;
    }
    return tilde;
}

double conj_equivariance_residual(const HypercomplexFrame& frame, const TwoFormQ& omega1,
                                  const TwoFormQ& omega2, const ComplexTangentVector& v) {
    const Eigen::MatrixXcd tilde = build_omega_tilde(frame, omega1, omega2);
    const Eigen::VectorXcd lhs = tilde * sigma(frame, v);
    const Eigen::VectorXcd rhs = sigma(frame, tilde * v);
    return (lhs - rhs).norm() / (1.0 + tilde.norm() * v.norm());
}

DiagonalizationResult simultaneous_diagonalize(const HypercomplexFrame& frame,
                                               const TwoFormQ& omega1, const TwoFormQ& omega2,
                                               const SimDiagOptions& opts) {
    const int m = frame.holo_dim();
    const int n = frame.n();
    const Eigen::MatrixXcd tilde = build_omega_tilde(frame, omega1, omega2, opts);
    const double tilde_norm = tilde.norm() + 1.0;

    DiagonalizationResult out;
    out.basis = Eigen::MatrixXcd(m, n);
    out.eigenvalues = Eigen::VectorXcd(n);

    std::vector<Eigen::VectorXcd> chosen;  // e_1, sigma e_1, e_2, ...
    for (int step = 0; step < n; ++step) {
        // V' = null space of the Omega_1-pairings with every chosen vector
        Eigen::MatrixXcd vprime;
        if (chosen.empty()) {
            vprime = Eigen::MatrixXcd::Identity(m, m);
        } else {
            Eigen::MatrixXcd constraints(chosen.size(), m);
            for (std::size_t r = 0; r < chosen.size(); ++r)
                constraints.row(r) = chosen[r].transpose() * omega1.matrix();
            Eigen::JacobiSVD<Eigen::MatrixXcd> svd(constraints, Eigen::ComputeFullV);
            const int rank = static_cast<int>(chosen.size());
            vprime = svd.matrixV().rightCols(m - rank);
        }

        const Eigen::MatrixXcd restricted = vprime.adjoint() * tilde * vprime;
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(restricted);
        if (es.info() != Eigen::Success)
            throw std::runtime_error("simultaneous_diagonalize: eigen decomposition failed");

        // deterministic pick: best full-space eigenpair residual, ties by
        // |lambda| then column index
        int best = -1;
        double best_res = 0.0;
        const int dim = static_cast<int>(restricted.rows());
        for (int c = 0; c < dim; ++c) {
            const Eigen::VectorXcd cand = vprime * es.eigenvectors().col(c);
            const Complex lam = es.eigenvalues()(c);
            const double res = (tilde * cand - lam * cand).norm() / (tilde_norm * cand.norm());
            const bool better =
                best < 0 || res < best_res - 1e-15 ||
                (std::abs(res - best_res) <= 1e-15 &&
                 std::abs(lam) > std::abs(es.eigenvalues()(best)) + 1e-15);
            if (better) {
                best = c;
                best_res = res;
            }
        }
        if (best_res > opts.breakdown_tol)
            throw std::runtime_error(
                "simultaneous_diagonalize: no eigenvector of the restricted operator within "
                "tolerance (defective numerics)");

        Eigen::VectorXcd e = vprime * es.eigenvectors().col(best);
        e /= e.norm();
        out.basis.col(step) = e;
        out.eigenvalues(step) = es.eigenvalues()(best);
        chosen.push_back(e);
        chosen.push_back(sigma(frame, e));
    }

    // residual: the four orthogonality families of the chosen 2n vectors
    const double scale = form_scale(omega1, omega2) + 1e-300;
    double res = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const Eigen::VectorXcd ei = out.basis.col(i);
            const Eigen::VectorXcd ej = out.basis.col(j);
            const Eigen::VectorXcd sej = sigma(frame, ej);
            res = std::max(res, std::abs(pair_eval(omega1, ei, ej)));
            res = std::max(res, std::abs(pair_eval(omega2, ei, ej)));
            res = std::max(res, std::abs(pair_eval(omega1, ei, sej)));
            res = std::max(res, std::abs(pair_eval(omega2, ei, sej)));
        }
    }
    out.residual = res / scale;
    return out;
}

NormalizedDiagonalization normalize_to_standard(const HypercomplexFrame& frame,
                                                const DiagonalizationResult& result,
                                                const TwoFormQ& omega1, const TwoFormQ& omega2) {
    const int n = frame.n();
    NormalizedDiagonalization out;
    out.basis = result.basis;
    out.relative_eigenvalues = Eigen::VectorXcd(n);
    for (int i = 0; i < n; ++i) {
        Eigen::VectorXcd e = result.basis.col(i);
        const Complex h = pair_eval(omega1, e, sigma(frame, e));
        if (!(h.real() > 0.0))
            throw std::runtime_error("normalize_to_standard: Omega_1 pairing not positive");
        e /= std::sqrt(h.real());
        out.basis.col(i) = e;
        out.relative_eigenvalues(i) = pair_eval(omega2, e, sigma(frame, e));
    }
    return out;
}

TwoFormQ random_q_real(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> dist(0.0, 1.0);
    Eigen::MatrixXcd R = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
    for (int i = 0; i < 2 * n; ++i)
        for (int j = i + 1; j < 2 * n; ++j) {
            R(i, j) = Complex(dist(rng), dist(rng));
            R(j, i) = -R(i, j);
        }
    const Eigen::MatrixXcd A = (R + q_real_involution(R)) / 2.0;
    return TwoFormQ::from_matrix(A);
}

TwoFormQ random_strictly_q_positive(std::mt19937_64& rng, int n, double margin) {
    const TwoFormQ base = random_q_real(rng, n);
    const Eigen::VectorXd ev = pairing_eigenvalues(base);
    const double shift = margin - ev(0);
    return TwoFormQ::from_matrix(base.matrix() + shift * standard_omega_matrix(n));
}

Eigen::VectorXcd random_complex_vector(std::mt19937_64& rng, int dim) {
    std::normal_distribution<double> dist(0.0, 1.0);
    Eigen::VectorXcd v(dim);
    for (int i = 0; i < dim; ++i) v(i) = Complex(dist(rng), dist(rng));
    return v;
}

CoefficientBoundSides pointwise_coefficient_bound(const PointwiseCoefficients& coeffs, int k,
                                                  double eps, double B) {
    const int n = static_cast<int>(coeffs.phis.size());
    if (eps <= 0.0) throw std::invalid_argument("pointwise_coefficient_bound: eps must be positive");
    if (k < 0 || k > n - 1) throw std::invalid_argument("pointwise_coefficient_bound: k out of range");
    if (static_cast<int>(coeffs.a.size()) != 2 * n || static_cast<int>(coeffs.b.size()) != 2 * n)
        throw std::invalid_argument("pointwise_coefficient_bound: coefficient count mismatch");

    double lhs = 0.0, sq_sum = 0.0, ek = 0.0;
    std::vector<int> comb(k);
    for (int i = 0; i < k; ++i) comb[i] = i;
    while (true) {
        double prod = 1.0;
        for (int c : comb) prod *= coeffs.phis[c];
        double inner_lhs = 0.0, inner_sq = 0.0;
        for (int j = 1; j <= n; ++j) {
            bool in = false;
            for (int c : comb)
                if (c == j - 1) in = true;
            if (in) continue;
            const double a_odd = std::abs(coeffs.a[2 * j - 2]);
            const double a_even = std::abs(coeffs.a[2 * j - 1]);
            const double b_odd = std::abs(coeffs.b[2 * j - 2]);
            const double b_even = std::abs(coeffs.b[2 * j - 1]);
            inner_lhs += a_even * b_even + a_odd * b_odd;
            inner_sq += a_odd * a_odd + a_even * a_even;
        }
        lhs += inner_lhs * prod;
        sq_sum += inner_sq * prod;
        ek += prod;
        if (k == 0) break;
        int pos = k - 1;
        while (pos >= 0 && comb[pos] == n - k + pos) --pos;
        if (pos < 0) break;
        ++comb[pos];
        for (int i = pos + 1; i < k; ++i) comb[i] = comb[i - 1] + 1;
    }
    return {lhs, B * eps * (n - k) * ek + (B / eps) * sq_sum};
}

}  // namespace qma
