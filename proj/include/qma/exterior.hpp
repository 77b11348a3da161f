#pragma once

// Sparse exterior algebra over up to 32 anticommuting generators.  A term is a
// bitmask (the strictly increasing multi-index) with a scalar coefficient; the
// scalar type is a template parameter so the same machinery runs in complex
// floating point, exact Gaussian rationals, or polynomial coefficients.

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

namespace qma {

using Mask = std::uint32_t;

inline int mask_degree(Mask m) { return __builtin_popcount(m); }

/// Parity sign of merging the sorted index sets a and b (disjoint): for each
/// generator in b, count the generators of a above it.
inline int merge_sign(Mask a, Mask b) {
    int swaps = 0;
    Mask rest = b;
    while (rest) {
        const int bit = __builtin_ctz(rest);
        swaps += __builtin_popcount(a >> (bit + 1));
        rest &= rest - 1;
    }
    return (swaps & 1) ? -1 : +1;
}

template <class S>
bool scalar_is_zero(const S& s) {
    return s == S{};
}
inline bool scalar_is_zero(const std::complex<double>& s) { return s == std::complex<double>(); }

template <class Scalar>
class Form {
public:
    using Terms = std::map<Mask, Scalar>;

    explicit Form(int num_generators = 0) : gens_(num_generators) {
        if (num_generators < 0 || num_generators > 32)
            throw std::invalid_argument("Form: generator count out of range");
    }

    int generators() const { return gens_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    Scalar coefficient(Mask m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? Scalar{} : it->second;
    }

    void add_term(Mask m, const Scalar& c) {
        if (gens_ < 32 && m >= (Mask{1} << gens_) && m != 0)
            throw std::invalid_argument("Form: index outside generator range");
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            if (!scalar_is_zero(c)) terms_.emplace(m, c);
        } else {
            it->second = it->second + c;
            if (scalar_is_zero(it->second)) terms_.erase(it);
        }
    }

    /// Largest homogeneous degree present (0 for the zero form).
    int degree() const {
        int d = 0;
        for (const auto& [m, c] : terms_) d = std::max(d, mask_degree(m));
        return d;
    }

    friend Form operator+(const Form& a, const Form& b) {
        check_compatible(a, b);
        Form out = a;
        for (const auto& [m, c] : b.terms_) out.add_term(m, c);
        return out;
    }
    friend Form operator-(const Form& a, const Form& b) {
        check_compatible(a, b);
        Form out = a;
        for (const auto& [m, c] : b.terms_) out.add_term(m, -c);
        return out;
    }
    friend Form operator*(const Scalar& s, const Form& a) {
        Form out(a.gens_);
        if (scalar_is_zero(s)) return out;
        for (const auto& [m, c] : a.terms_) out.add_term(m, s * c);
        return out;
    }
    Form operator-() const {
        Form out(gens_);
        for (const auto& [m, c] : terms_) out.terms_.emplace(m, -c);
        return out;
    }

    friend Form wedge(const Form& a, const Form& b) {
        check_compatible(a, b);
        if (a.degree() + b.degree() > a.gens_)
            throw std::invalid_argument("wedge: degree overflow");
        Form out(a.gens_);
        for (const auto& [ma, ca] : a.terms_) {
            for (const auto& [mb, cb] : b.terms_) {
                if (ma & mb) continue;
                const Scalar prod = ca * cb;
                if (scalar_is_zero(prod)) continue;
                const int sgn = merge_sign(ma, mb);
                out.add_term(ma | mb, sgn > 0 ? prod : -prod);
            }
        }
        return out;
    }

    /// Relabel generators by a signed permutation; coefficients pass through
    /// coeff_op (identity for linear maps, conjugation for antilinear ones).
    template <class CoeffOp>
    Form mapped(const std::vector<std::pair<int, int>>& perm, CoeffOp coeff_op) const {
        Form out(gens_);
        for (const auto& [m, c] : terms_) {
            std::vector<int> images;
            int sgn = 1;
            Mask rest = m;
            while (rest) {
                const int g = __builtin_ctz(rest);
                rest &= rest - 1;
                sgn *= perm[g].second;
                images.push_back(perm[g].first);
            }
            // parity of sorting the image list
            Mask target = 0;
            for (std::size_t i = 0; i < images.size(); ++i) {
                for (std::size_t jj = i + 1; jj < images.size(); ++jj)
                    if (images[i] > images[jj]) sgn = -sgn;
                if (target & (Mask{1} << images[i]))
                    throw std::invalid_argument("Form::mapped: permutation not injective");
                target |= Mask{1} << images[i];
            }
            Scalar nc = coeff_op(c);
            out.add_term(target, sgn > 0 ? nc : -nc);
        }
        return out;
    }

    /// Substitute each generator by a 1-form (general linear change of frame).
    friend Form substitute(const Form& a, const std::vector<Form>& images) {
        Form out(a.gens_);
        for (const auto& [m, c] : a.terms_) {
            Form prod(a.gens_);
            prod.add_term(0, c);
            Mask rest = m;
            while (rest) {
                const int g = __builtin_ctz(rest);
                rest &= rest - 1;
                prod = wedge(prod, images.at(g));
            }
            out = out + prod;
        }
        return out;
    }

    friend Form pow_wedge(const Form& a, int k) {
        Form out(a.gens_);
        out.add_term(0, unit_scalar(Scalar{}));
        for (int i = 0; i < k; ++i) out = wedge(out, a);
        return out;
    }

private:
    static void check_compatible(const Form& a, const Form& b) {
        if (a.gens_ != b.gens_) throw std::invalid_argument("Form: generator space mismatch");
    }

    static Scalar unit_scalar(const Scalar&) { return Scalar{1}; }

    int gens_;
    Terms terms_;
};

}  // namespace qma
