#include "qma/hypercomplex.hpp"

#include "qma/quaternion.hpp"

#include <stdexcept>

namespace qma {

namespace {

// 4x4 block of the right action v -> v*u on one quaternionic coordinate,
// row r = image of the basis quaternion e_r under right multiplication by u.
Eigen::Matrix4i right_action_block(const Quaternion& u) {
    const Quaternion basis[4] = {Quaternion::one(), Quaternion::i(), Quaternion::j(),
                                 Quaternion::k()};
    Eigen::Matrix4i m;
    for (int r = 0; r < 4; ++r) {
        const Quaternion img = quat_mul(basis[r], u);
        const double comp[4] = {img.w, img.x, img.y, img.z};
        for (int c = 0; c < 4; ++c) m(r, c) = static_cast<int>(std::lround(comp[c]));
    }
    return m;
}

Eigen::MatrixXi block_diagonal(int n, const Eigen::Matrix4i& block) {
    Eigen::MatrixXi m = Eigen::MatrixXi::Zero(4 * n, 4 * n);
    for (int a = 0; a < n; ++a) m.block<4, 4>(4 * a, 4 * a) = block;
    return m;
}

}  // namespace

HypercomplexFrame::HypercomplexFrame(int n) : n_(n) {
    if (n < 1) throw std::invalid_argument("HypercomplexFrame: n must be >= 1");
    I_ = block_diagonal(n, right_action_block(Quaternion::i()));
    J_ = block_diagonal(n, right_action_block(Quaternion::j()));
    K_ = block_diagonal(n, right_action_block(Quaternion::k()));

    // Z_{2a} = (e_{4a} - i e_{4a+1})/2, Z_{2a+1} = (e_{4a+2} + i e_{4a+3})/2.
    holo_ = Eigen::MatrixXcd::Zero(2 * n, 4 * n);
    for (int a = 0; a < n; ++a) {
        holo_(2 * a, 4 * a) = Complex(0.5, 0.0);
        holo_(2 * a, 4 * a + 1) = Complex(0.0, -0.5);
        holo_(2 * a + 1, 4 * a + 2) = Complex(0.5, 0.0);
        holo_(2 * a + 1, 4 * a + 3) = Complex(0.0, 0.5);
    }
}

HypercomplexFrame standard_frame(int n) { return HypercomplexFrame(n); }

CovectorImage j_covector_holo(int h) {
    if (h % 2 == 0) return {h + 1, -1};
    return {h - 1, +1};
}

CovectorImage j_covector_anti(int h) {
    if (h % 2 == 0) return {h + 1, -1};
    return {h - 1, +1};
}

CovectorImage jinv_covector_anti(int h) {
    if (h % 2 == 0) return {h + 1, +1};
    return {h - 1, -1};
}

ComplexTangentVector j_on_vector(const HypercomplexFrame& frame, const ComplexTangentVector& v) {
    const int m = frame.holo_dim();
    if (v.size() != m) throw std::invalid_argument("j_on_vector: component count mismatch");
    ComplexTangentVector out(m);
    // Z_{2a} J = conj-basis e_{2a+1}, Z_{2a+1} J = -conj-basis e_{2a}.
    for (int a = 0; a < frame.n(); ++a) {
        out(2 * a) = -v(2 * a + 1);
        out(2 * a + 1) = v(2 * a);
    }
    return out;
}

ComplexTangentVector j_companion(const HypercomplexFrame& frame, const ComplexTangentVector& v) {
    return j_on_vector(frame, v.conjugate());
}

}  // namespace qma
