#pragma once

// Test-only independent oracles: a permutation-based wedge product that never
// touches the bitmask merge path, the Fourier-Bessel closed form for the n = 1
// harmonic solve, and a damped Picard fixed-point solver for n = 2.

#include "qma/estimates.hpp"
#include "qma/exterior.hpp"
#include "qma/grid.hpp"
#include "qma/solver.hpp"
#include "qma/torus_ops.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <random>
#include <vector>

namespace oracles {

// ---- naive exterior algebra ------------------------------------------------

template <class S>
using NaiveForm = std::map<std::vector<int>, S>;

/// Sorts the index list in place, returns the permutation sign (0 on repeats).
inline int sort_sign(std::vector<int>& idx) {
    int sign = 1;
    for (std::size_t i = 0; i + 1 < idx.size(); ++i)
        for (std::size_t j = 0; j + 1 < idx.size() - i; ++j)
            if (idx[j] > idx[j + 1]) {
                std::swap(idx[j], idx[j + 1]);
                sign = -sign;
            }
    for (std::size_t i = 0; i + 1 < idx.size(); ++i)
        if (idx[i] == idx[i + 1]) return 0;
    return sign;
}

template <class S>
NaiveForm<S> naive_wedge(const NaiveForm<S>& a, const NaiveForm<S>& b) {
    NaiveForm<S> out;
    for (const auto& [ia, ca] : a) {
        for (const auto& [ib, cb] : b) {
            std::vector<int> idx = ia;
            idx.insert(idx.end(), ib.begin(), ib.end());
            const int sign = sort_sign(idx);
            if (sign == 0) continue;
            S term = ca * cb;
            if (sign < 0) term = -term;
            auto it = out.find(idx);
            if (it == out.end())
                out.emplace(idx, term);
            else
                it->second = it->second + term;
        }
    }
    for (auto it = out.begin(); it != out.end();)
        it = qma::scalar_is_zero(it->second) ? out.erase(it) : std::next(it);
    return out;
}

// ---- n = 1 harmonic closed form ---------------------------------------------

/// Solution of 1/4 Delta phi = A e^{eps cos(2 pi x)} - 1 with A = 1/I_0(eps)
/// and sup phi = 0, as a Fourier-Bessel series on the first coordinate.
inline qma::ScalarField bessel_harmonic_solution(const qma::SpectralGrid& grid, double eps,
                                                 int terms = 12) {
    const double I0 = std::cyl_bessel_i(0.0, eps);
    qma::ScalarField phi = qma::ScalarField::sample(grid, [&](const std::vector<double>& x) {
        double acc = 0.0;
        for (int m = 1; m <= terms; ++m) {
            const double Im = std::cyl_bessel_i(static_cast<double>(m), eps);
            acc += -(2.0 / (M_PI * M_PI)) * (Im / I0) * std::cos(2.0 * M_PI * m * x[0]) /
                   static_cast<double>(m * m);
        }
        return acc;
    });
    return phi.shifted(-phi.max());
}

// ---- damped Picard fixed point ----------------------------------------------

struct PicardResult {
    qma::ScalarField phi;
    int iterations = 0;
    double last_change = 0.0;
    bool converged = false;
};

/// phi <- phi - sigma (1/4 Delta)^{-1} (log density(phi) - log(A e^F)),
/// run to a tight fixed point; independent of the Newton path.
inline PicardResult damped_picard(const qma::ScalarField& F, double sigma = 0.9,
                                  double tol = 2e-13, int max_iters = 200000) {
    const double A = qma::normalization_constant(F);
    qma::ScalarField target(F.grid(), 0.0);
    for (std::size_t i = 0; i < target.size(); ++i) target[i] = std::log(A) + F[i];
    PicardResult res{qma::ScalarField(F.grid(), 0.0), 0, 0.0, false};
    qma::ScalarField phi(F.grid(), 0.0);
    for (int it = 0; it < max_iters; ++it) {
        const qma::ScalarField density = qma::ma_density(phi);
        qma::ScalarField r(F.grid(), 0.0);
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = std::log(density[i]) - target[i];
        r = r.shifted(-r.mean());
        const qma::ScalarField step = qma::quaternionic_laplacian_inverse(r);
        double change = 0.0;
        for (std::size_t i = 0; i < phi.size(); ++i) {
            const double d = -sigma * step[i];
            phi[i] += d;
            change = std::max(change, std::abs(d));
        }
        res.iterations = it + 1;
        res.last_change = change;
        if (change < tol) {
            res.converged = true;
            break;
        }
    }
    res.phi = phi.shifted(-phi.max());
    return res;
}

// ---- misc -------------------------------------------------------------------

inline double max_abs(const qma::ScalarField& f) {
    double m = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) m = std::max(m, std::abs(f[i]));
    return m;
}

inline double sup_diff(const qma::ScalarField& a, const qma::ScalarField& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

/// Band-limited random field: random harmonics on every active coordinate.
inline qma::ScalarField random_band_limited(const qma::SpectralGrid& grid, std::mt19937_64& rng,
                                            int max_freq = 2, double amp_scale = 0.3) {
    std::uniform_real_distribution<double> amp(0.1 * amp_scale, amp_scale);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
    qma::HarmonicList hs;
    for (int c : grid.active) {
        for (int f = 1; f <= max_freq; ++f) {
            qma::Harmonic h;
            h.coord = c;
            h.freq = f;
            h.amp = amp(rng) / f;
            h.phase = phase(rng);
            hs.push_back(h);
        }
    }
    return qma::sample_harmonics(grid, hs);
}

}  // namespace oracles
