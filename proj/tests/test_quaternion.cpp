#include "qma/quaternion.hpp"

#include <doctest.h>

#include <random>

using namespace qma;

TEST_CASE("multiplication table") {
    const Quaternion i = Quaternion::i(), j = Quaternion::j(), k = Quaternion::k();
    CHECK(quat_mul(i, j).z == 1.0);
    CHECK(quat_mul(j, k).x == 1.0);
    CHECK(quat_mul(k, i).y == 1.0);
    CHECK(quat_mul(i, i).w == -1.0);
    CHECK(quat_mul(j, i).z == -1.0);
}

TEST_CASE("identity element") {
    const Quaternion a{1.5, -2.0, 0.25, 3.0};
    const Quaternion r = quat_mul(Quaternion::one(), a);
    CHECK(r.w == a.w);
    CHECK(r.x == a.x);
    CHECK(r.y == a.y);
    CHECK(r.z == a.z);
}

TEST_CASE("associativity on random triples") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int t = 0; t < 100; ++t) {
        const Quaternion a{u(rng), u(rng), u(rng), u(rng)};
        const Quaternion b{u(rng), u(rng), u(rng), u(rng)};
        const Quaternion c{u(rng), u(rng), u(rng), u(rng)};
        const Quaternion lhs = quat_mul(quat_mul(a, b), c);
        const Quaternion rhs = quat_mul(a, quat_mul(b, c));
        CHECK(std::abs(lhs.w - rhs.w) < 1e-12);
        CHECK(std::abs(lhs.x - rhs.x) < 1e-12);
        CHECK(std::abs(lhs.y - rhs.y) < 1e-12);
        CHECK(std::abs(lhs.z - rhs.z) < 1e-12);
    }
}

TEST_CASE("norm is multiplicative") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int t = 0; t < 50; ++t) {
        const Quaternion a{u(rng), u(rng), u(rng), u(rng)};
        const Quaternion b{u(rng), u(rng), u(rng), u(rng)};
        CHECK(quat_mul(a, b).norm() == doctest::Approx(a.norm() * b.norm()).epsilon(1e-12));
    }
}
