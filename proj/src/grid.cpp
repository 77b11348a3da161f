#include "qma/grid.hpp"

#include "qma/wedge_identities.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>

namespace qma {

namespace {

// One cached FFTW plan pair per grid shape, executed through persistent
// aligned buffers (serial access guarded by a mutex).
class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    void forward(const std::vector<int>& dims, const std::complex<double>* in,
                 std::complex<double>* out) {
        run(dims, in, out, FFTW_FORWARD);
    }
    void backward(const std::vector<int>& dims, const std::complex<double>* in,
                  std::complex<double>* out) {
        run(dims, in, out, FFTW_BACKWARD);
    }

private:
    struct Entry {
        fftw_plan fwd = nullptr;
        fftw_plan bwd = nullptr;
        fftw_complex* buf_in = nullptr;
        fftw_complex* buf_out = nullptr;
        std::size_t count = 0;

        Entry() = default;
        Entry(const Entry&) = delete;
        Entry& operator=(const Entry&) = delete;
        ~Entry() {
            if (fwd) fftw_destroy_plan(fwd);
            if (bwd) fftw_destroy_plan(bwd);
            if (buf_in) fftw_free(buf_in);
            if (buf_out) fftw_free(buf_out);
        }
    };

    PlanCache() = default;
    ~PlanCache() {
        entries_.clear();
        fftw_cleanup();
    }

    void run(const std::vector<int>& dims, const std::complex<double>* in,
             std::complex<double>* out, int sign) {
        std::lock_guard<std::mutex> lock(mu_);
        Entry& e = entries_[dims];
        if (!e.fwd) {
            std::size_t count = 1;
            for (int d : dims) count *= static_cast<std::size_t>(d);
            e.count = count;
            e.buf_in = fftw_alloc_complex(count);
            e.buf_out = fftw_alloc_complex(count);
            e.fwd = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), e.buf_in, e.buf_out,
                                  FFTW_FORWARD, FFTW_ESTIMATE);
            e.bwd = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), e.buf_in, e.buf_out,
                                  FFTW_BACKWARD, FFTW_ESTIMATE);
        }
        // std::complex<double> is layout-compatible with fftw_complex
        std::memcpy(static_cast<void*>(e.buf_in), static_cast<const void*>(in),
                    e.count * sizeof(fftw_complex));
        fftw_execute(sign == FFTW_FORWARD ? e.fwd : e.bwd);
        std::memcpy(static_cast<void*>(out), static_cast<const void*>(e.buf_out),
                    e.count * sizeof(fftw_complex));
    }

    std::mutex mu_;
    std::map<std::vector<int>, Entry> entries_;
};

}  // namespace

SpectralGrid::SpectralGrid(int n_, std::vector<int> active_, int N_)
    : n(n_), active(std::move(active_)), N(N_) {
    if (n < 1) throw std::invalid_argument("SpectralGrid: n >= 1 required");
    if (N < 4 || N % 2 != 0) throw std::invalid_argument("SpectralGrid: N must be even and >= 4");
    if (active.empty()) throw std::invalid_argument("SpectralGrid: at least one active coordinate");
    std::sort(active.begin(), active.end());
    for (std::size_t i = 0; i < active.size(); ++i) {
        if (active[i] < 0 || active[i] >= 4 * n)
            throw std::invalid_argument("SpectralGrid: active coordinate out of range");
        if (i > 0 && active[i] == active[i - 1])
            throw std::invalid_argument("SpectralGrid: duplicate active coordinate");
    }
}

std::size_t SpectralGrid::num_points() const {
    std::size_t p = 1;
    for (int i = 0; i < dims(); ++i) p *= static_cast<std::size_t>(N);
    return p;
}

int SpectralGrid::axis_of(int coord) const {
    for (int i = 0; i < dims(); ++i)
        if (active[i] == coord) return i;
    return -1;
}

std::vector<int> SpectralGrid::index_to_multi(std::size_t idx) const {
    std::vector<int> multi(dims());
    for (int a = dims() - 1; a >= 0; --a) {
        multi[a] = static_cast<int>(idx % N);
        idx /= N;
    }
    return multi;
}

std::vector<double> SpectralGrid::point(std::size_t idx) const {
    std::vector<double> x(4 * n, 0.0);
    const std::vector<int> multi = index_to_multi(idx);
    for (int a = 0; a < dims(); ++a) x[active[a]] = static_cast<double>(multi[a]) / N;
    return x;
}

ScalarField::ScalarField(const SpectralGrid& grid, double fill)
    : grid_(grid), values_(grid.num_points(), fill) {}

ScalarField ScalarField::sample(const SpectralGrid& grid,
                                const std::function<double(const std::vector<double>&)>& fn) {
    ScalarField f(grid);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = fn(grid.point(i));
    return f;
}

double ScalarField::min() const {
    double m = values_[0];
    for (double v : values_) m = std::min(m, v);
    return m;
}
double ScalarField::max() const {
    double m = values_[0];
    for (double v : values_) m = std::max(m, v);
    return m;
}
double ScalarField::mean() const {
    double acc = 0.0;
    for (double v : values_) acc += v;
    return acc / static_cast<double>(values_.size());
}

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
    ScalarField out = a;
    out += b;
    return out;
}
ScalarField operator-(const ScalarField& a, const ScalarField& b) {
    ScalarField out = a;
    out -= b;
    return out;
}
ScalarField operator*(double s, const ScalarField& a) {
    ScalarField out = a;
    for (auto& v : out.values_) v *= s;
    return out;
}
ScalarField& ScalarField::operator+=(const ScalarField& b) {
    if (!(grid_ == b.grid_)) throw std::invalid_argument("ScalarField: grid mismatch");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += b.values_[i];
    return *this;
}
ScalarField& ScalarField::operator-=(const ScalarField& b) {
    if (!(grid_ == b.grid_)) throw std::invalid_argument("ScalarField: grid mismatch");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= b.values_[i];
    return *this;
}
ScalarField ScalarField::shifted(double c) const {
    ScalarField out = *this;
    for (auto& v : out.values_) v += c;
    return out;
}

ScalarField exp_field(const ScalarField& f) {
    ScalarField out = f;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::exp(f[i]);
    return out;
}
ScalarField log_field(const ScalarField& f) {
    ScalarField out = f;
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (!(f[i] > 0.0)) throw std::domain_error("log_field: non-positive value");
        out[i] = std::log(f[i]);
    }
    return out;
}

namespace {

std::vector<std::complex<double>> run_fft(const SpectralGrid& grid,
                                          const std::vector<std::complex<double>>& in,
                                          bool forward) {
    std::vector<int> dims(grid.dims(), grid.N);
    std::vector<std::complex<double>> out(in.size());
    if (forward)
        PlanCache::instance().forward(dims, in.data(), out.data());
    else
        PlanCache::instance().backward(dims, in.data(), out.data());
    return out;
}

int signed_frequency(int idx, int N) {
    if (idx == N / 2) return 0;  // Nyquist is annihilated by odd-order symbols
    return idx <= N / 2 ? idx : idx - N;
}

}  // namespace

FieldSpectrum analyze(const ScalarField& f) {
    std::vector<std::complex<double>> in(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) in[i] = f[i];
    auto coeff = run_fft(f.grid(), in, true);
    const double inv = 1.0 / static_cast<double>(f.size());
    for (auto& c : coeff) c *= inv;
    return FieldSpectrum(f.grid(), std::move(coeff));
}

FieldSpectrum analyze(const ComplexField& f) {
    auto coeff = run_fft(f.grid, f.v, true);
    const double inv = 1.0 / static_cast<double>(f.v.size());
    for (auto& c : coeff) c *= inv;
    return FieldSpectrum(f.grid, std::move(coeff));
}

ComplexField FieldSpectrum::inverse_with_symbol(
    const std::function<std::complex<double>(const std::vector<int>&)>& symbol) const {
    std::vector<std::complex<double>> weighted(coeff_.size());
    std::vector<int> freq(grid_.dims());
    for (std::size_t idx = 0; idx < coeff_.size(); ++idx) {
        std::size_t rem = idx;
        for (int a = grid_.dims() - 1; a >= 0; --a) {
            freq[a] = signed_frequency(static_cast<int>(rem % grid_.N), grid_.N);
            rem /= grid_.N;
        }
        weighted[idx] = coeff_[idx] * symbol(freq);
    }
    ComplexField out{grid_, run_fft(grid_, weighted, false)};
    return out;
}

ScalarField derivative(const ScalarField& f, int coord) {
    const SpectralGrid& g = f.grid();
    ScalarField out(g, 0.0);
    const int axis = g.axis_of(coord);
    if (axis < 0) return out;
    const std::complex<double> two_pi_i(0.0, 2.0 * M_PI);
    const ComplexField d = analyze(f).inverse_with_symbol(
        [&](const std::vector<int>& k) { return two_pi_i * static_cast<double>(k[axis]); });
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = d.v[i].real();
    return out;
}

double integrate(const ScalarField& f) { return f.mean() * volume_scale(f.grid().n); }

double lp_norm(const ScalarField& f, double p) {
    if (p < 1.0) throw std::invalid_argument("lp_norm: p >= 1 required");
    double acc = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) acc += std::pow(std::abs(f[i]), p);
    acc /= static_cast<double>(f.size());
    return std::pow(acc * volume_scale(f.grid().n), 1.0 / p);
}

}  // namespace qma
