#pragma once

#include <cmath>

namespace qma {

/// Quaternion w + x·i + y·j + z·k over doubles, Hamilton product.
struct Quaternion {
    double w = 0.0;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    static Quaternion one() { return {1.0, 0.0, 0.0, 0.0}; }
    static Quaternion i() { return {0.0, 1.0, 0.0, 0.0}; }
    static Quaternion j() { return {0.0, 0.0, 1.0, 0.0}; }
    static Quaternion k() { return {0.0, 0.0, 0.0, 1.0}; }

    Quaternion conjugate() const { return {w, -x, -y, -z}; }
    double norm_sq() const { return w * w + x * x + y * y + z * z; }
    double norm() const { return std::sqrt(norm_sq()); }

    friend Quaternion operator+(const Quaternion& a, const Quaternion& b) {
        return {a.w + b.w, a.x + b.x, a.y + b.y, a.z + b.z};
    }
    friend Quaternion operator-(const Quaternion& a, const Quaternion& b) {
        return {a.w - b.w, a.x - b.x, a.y - b.y, a.z - b.z};
    }
    friend Quaternion operator*(double s, const Quaternion& a) {
        return {s * a.w, s * a.x, s * a.y, s * a.z};
    }
};

inline Quaternion quat_mul(const Quaternion& a, const Quaternion& b) {
    return {
        a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
        a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
        a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
        a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
    };
}

}  // namespace qma
