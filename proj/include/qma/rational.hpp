#pragma once

// Exact scalars for the symbolic side of the exterior algebra: Gaussian
// rationals (re + i·im over arbitrary-precision rationals) and sparse
// multivariate polynomials with Gaussian-rational coefficients.

#include <gmpxx.h>

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace qma {

struct GaussianRational {
    mpq_class re, im;

    GaussianRational() : re(0), im(0) {}
    GaussianRational(int v) : re(v), im(0) {}  // NOLINT: implicit by design
    GaussianRational(mpq_class r, mpq_class i = 0) : re(std::move(r)), im(std::move(i)) {}

    static GaussianRational i() { return {mpq_class(0), mpq_class(1)}; }

    GaussianRational conj() const { return {re, -im}; }
    bool is_zero() const { return re == 0 && im == 0; }

    friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
        return {a.re - b.re, a.im - b.im};
    }
    GaussianRational operator-() const { return {-re, -im}; }
    friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
        return a.re == b.re && a.im == b.im;
    }

    std::string str() const {
        std::ostringstream os;
        os << re.get_str();
        if (im != 0) os << (im > 0 ? "+" : "") << im.get_str() << "i";
        return os.str();
    }
};

inline bool scalar_is_zero(const GaussianRational& s) { return s.is_zero(); }

/// Monomial as a sorted list of (variable id, exponent) pairs.
struct Monomial {
    std::vector<std::pair<int, int>> factors;

    friend auto operator<=>(const Monomial&, const Monomial&) = default;

    friend Monomial operator*(const Monomial& a, const Monomial& b) {
        Monomial out;
        auto ia = a.factors.begin(), ib = b.factors.begin();
        while (ia != a.factors.end() || ib != b.factors.end()) {
            if (ib == b.factors.end() || (ia != a.factors.end() && ia->first < ib->first)) {
                out.factors.push_back(*ia++);
            } else if (ia == a.factors.end() || ib->first < ia->first) {
                out.factors.push_back(*ib++);
            } else {
                out.factors.emplace_back(ia->first, ia->second + ib->second);
                ++ia;
                ++ib;
            }
        }
        return out;
    }
};

class Polynomial {
public:
    Polynomial() = default;
    Polynomial(int v) { *this = Polynomial(GaussianRational(v)); }  // NOLINT
    explicit Polynomial(const GaussianRational& c) {
        if (!c.is_zero()) terms_.emplace(Monomial{}, c);
    }
    static Polynomial variable(int id) {
        Polynomial p;
        p.terms_.emplace(Monomial{{{id, 1}}}, GaussianRational(1));
        return p;
    }

    bool is_zero() const { return terms_.empty(); }
    const std::map<Monomial, GaussianRational>& terms() const { return terms_; }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
        Polynomial out = a;
        for (const auto& [m, c] : b.terms_) out.add(m, c);
        return out;
    }
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
        Polynomial out = a;
        for (const auto& [m, c] : b.terms_) out.add(m, -c);
        return out;
    }
    Polynomial operator-() const {
        Polynomial out;
        for (const auto& [m, c] : terms_) out.terms_.emplace(m, -c);
        return out;
    }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        Polynomial out;
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) out.add(ma * mb, ca * cb);
        return out;
    }
    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        return a.terms_ == b.terms_;
    }

    /// Complex conjugation: coefficients conjugate, variables map through the
    /// supplied involution (e.g. a_j <-> abar_j; real variables map to themselves).
    Polynomial conjugated(const std::function<int(int)>& var_conj) const {
        Polynomial out;
        for (const auto& [m, c] : terms_) {
            Monomial cm;
            for (const auto& [v, e] : m.factors) cm.factors.emplace_back(var_conj(v), e);
            std::sort(cm.factors.begin(), cm.factors.end());
            out.add(cm, c.conj());
        }
        return out;
    }

    std::string str(const std::function<std::string(int)>& var_name) const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [m, c] : terms_) {
            if (!first) os << " + ";
            first = false;
            os << "(" << c.str() << ")";
            for (const auto& [v, e] : m.factors) {
                os << "*" << var_name(v);
                if (e != 1) os << "^" << e;
            }
        }
        return os.str();
    }

private:
    void add(const Monomial& m, const GaussianRational& c) {
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            if (!c.is_zero()) terms_.emplace(m, c);
        } else {
            it->second = it->second + c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    std::map<Monomial, GaussianRational> terms_;
};

inline bool scalar_is_zero(const Polynomial& s) { return s.is_zero(); }

}  // namespace qma
