#pragma once

#include "equiloc/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

namespace equiloc {

/// Univariate polynomial in the degree-2 generator u, with exact rational
/// coefficients.  coefficient(i) is the coefficient of u^i.  Canonical form:
/// no trailing zero coefficients (the zero polynomial has no coefficients).
class Poly {
public:
    Poly() = default;

    explicit Poly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

    static Poly constant(Rational v) { return Poly({std::move(v)}); }

    /// c * u^k.
    static Poly monomial(Rational c, std::size_t k) {
        if (c.is_zero()) return Poly();
        std::vector<Rational> v(k + 1);
        v[k] = std::move(c);
        return Poly(std::move(v));
    }

    bool is_zero() const { return c_.empty(); }

    /// Degree in u; -1 for the zero polynomial.
    int degree() const { return static_cast<int>(c_.size()) - 1; }

    const std::vector<Rational>& coefficients() const { return c_; }

    Rational coefficient(std::size_t i) const {
        return i < c_.size() ? c_[i] : Rational(0);
    }

    Rational eval(const Rational& x) const {
        Rational acc(0);
        for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
        return acc;
    }

    Poly operator-() const {
        Poly r = *this;
        for (auto& v : r.c_) v = -v;
        return r;
    }

    friend Poly operator+(const Poly& a, const Poly& b) {
        std::vector<Rational> v(std::max(a.c_.size(), b.c_.size()));
        for (std::size_t i = 0; i < v.size(); ++i)
            v[i] = a.coefficient(i) + b.coefficient(i);
        return Poly(std::move(v));
    }
    friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return Poly();
        std::vector<Rational> v(a.c_.size() + b.c_.size() - 1);
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j)
                v[i + j] += a.c_[i] * b.c_[j];
        return Poly(std::move(v));
    }

    friend Poly operator*(const Rational& s, const Poly& p) {
        Poly r = p;
        for (auto& v : r.c_) v *= s;
        r.trim();
        return r;
    }

    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    /// e.g. "3 - 1/2*u + u^4"; "0" for the zero polynomial.
    std::string str() const {
        if (c_.empty()) return "0";
        std::string s;
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (c_[i].is_zero()) continue;
            Rational a = c_[i];
            if (!s.empty()) {
                s += a.sign() < 0 ? " - " : " + ";
                a = a.abs();
            }
            bool unit = a == Rational(1);
            if (i == 0)
                s += a.str();
            else {
                if (!unit) s += a.str() + "*";
                s += i == 1 ? "u" : "u^" + std::to_string(i);
            }
        }
        return s.empty() ? "0" : s;
    }

private:
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }

    std::vector<Rational> c_;
};

/// Exact product; deg(ab) = deg(a) + deg(b) for nonzero inputs.
inline Poly poly_mul(const Poly& a, const Poly& b) { return a * b; }

} // namespace equiloc
