#pragma once

// Discrete flat torus H^n / Z^{4n} sampled on N points per active coordinate.
// Fields depend only on the active subset S of the 4n real coordinates
// (inactive directions are constant); all differentiation is trigonometric
// (exact below Nyquist) and integration is the spectral mean times the
// recorded volume of (Omega ^ Omegabar)^n.

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace qma {

struct SpectralGrid {
    int n = 1;                // quaternionic dimension
    std::vector<int> active;  // sorted, unique, 0-based real coordinate indices
    int N = 8;                // points per active axis, even, >= 4

    SpectralGrid() = default;
    SpectralGrid(int n_, std::vector<int> active_, int N_);

    int dims() const { return static_cast<int>(active.size()); }
    std::size_t num_points() const;
    /// -1 when the coordinate is inactive.
    int axis_of(int coord) const;

    std::vector<int> index_to_multi(std::size_t idx) const;
    /// Coordinates of a grid point in [0,1)^{4n}; inactive entries are 0.
    std::vector<double> point(std::size_t idx) const;

    friend bool operator==(const SpectralGrid& a, const SpectralGrid& b) {
        return a.n == b.n && a.active == b.active && a.N == b.N;
    }
};

class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(const SpectralGrid& grid, double fill = 0.0);
    static ScalarField sample(const SpectralGrid& grid,
                              const std::function<double(const std::vector<double>&)>& fn);

    const SpectralGrid& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    double min() const;
    double max() const;
    double mean() const;

    friend ScalarField operator+(const ScalarField& a, const ScalarField& b);
    friend ScalarField operator-(const ScalarField& a, const ScalarField& b);
    friend ScalarField operator*(double s, const ScalarField& a);
    ScalarField& operator+=(const ScalarField& b);
    ScalarField& operator-=(const ScalarField& b);
    ScalarField shifted(double c) const;

private:
    SpectralGrid grid_;
    std::vector<double> values_;
};

ScalarField exp_field(const ScalarField& f);
ScalarField log_field(const ScalarField& f);

struct ComplexField {
    SpectralGrid grid;
    std::vector<std::complex<double>> v;
};

/// Forward spectrum, normalized so that coefficient 0 is the mean.
class FieldSpectrum {
public:
    FieldSpectrum(const SpectralGrid& grid, std::vector<std::complex<double>> coeff)
        : grid_(grid), coeff_(std::move(coeff)) {}

    const SpectralGrid& grid() const { return grid_; }
    const std::vector<std::complex<double>>& coefficients() const { return coeff_; }

    /// Inverse transform of symbol(k) * coeff(k); the symbol is evaluated on
    /// the signed integer frequency vector (Nyquist rows get k = 0).
    ComplexField inverse_with_symbol(
        const std::function<std::complex<double>(const std::vector<int>&)>& symbol) const;

private:
    SpectralGrid grid_;
    std::vector<std::complex<double>> coeff_;
};

FieldSpectrum analyze(const ScalarField& f);
FieldSpectrum analyze(const ComplexField& f);

/// d/dx_c (zero field when the coordinate is inactive).
ScalarField derivative(const ScalarField& f, int coord);

/// Integral against the volume element vol = 4^n (n!)^2 dx^{4n}.
double integrate(const ScalarField& f);
/// (integral of |f|^p)^(1/p) against the same volume element; p >= 1.
double lp_norm(const ScalarField& f, double p);

}  // namespace qma
