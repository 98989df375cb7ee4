#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace equiloc {

using BigInt = boost::multiprecision::cpp_int;

/// Exact rational number kept in canonical form: denominator > 0 and
/// gcd(|numerator|, denominator) = 1.  Equality is structural.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(int n) : num_(n), den_(1) {}
    Rational(long n) : num_(n), den_(1) {}
    Rational(long long n) : num_(n), den_(1) {}
    Rational(BigInt n) : num_(std::move(n)), den_(1) {}

    Rational(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) {
        if (den_ == 0)
            throw std::invalid_argument("Rational: zero denominator");
        canonicalize();
    }

    const BigInt& numerator() const { return num_; }
    const BigInt& denominator() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return den_ == 1; }

    /// -1, 0 or +1.
    int sign() const { return num_ == 0 ? 0 : (num_ < 0 ? -1 : 1); }

    Rational operator-() const { return raw(-num_, den_); }

    Rational& operator+=(const Rational& o) {
        num_ = num_ * o.den_ + o.num_ * den_;
        den_ *= o.den_;
        canonicalize();
        return *this;
    }
    Rational& operator-=(const Rational& o) { return *this += -o; }
    Rational& operator*=(const Rational& o) {
        num_ *= o.num_;
        den_ *= o.den_;
        canonicalize();
        return *this;
    }
    Rational& operator/=(const Rational& o) {
        if (o.num_ == 0)
            throw std::domain_error("Rational: division by zero");
        num_ *= o.den_;
        den_ *= o.num_;
        canonicalize();
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return a.num_ * b.den_ < b.num_ * a.den_;
    }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    Rational abs() const { return num_ < 0 ? -*this : *this; }

    Rational pow(unsigned e) const {
        Rational r(1), base = *this;
        while (e) {
            if (e & 1u) r *= base;
            base *= base;
            e >>= 1;
        }
        return r;
    }

    /// Parses "p", "-p" or "p/q" with integer p, positive integer q.
    /// Anything else (floats in particular) is rejected.
    static Rational parse(std::string_view s) {
        auto fail = [&] {
            throw std::invalid_argument("Rational: cannot parse '" + std::string(s) +
                                        "' (expected integer or p/q)");
        };
        if (s.empty()) fail();
        std::size_t slash = s.find('/');
        std::string_view ns = s.substr(0, slash == std::string_view::npos ? s.size() : slash);
        std::string_view ds = slash == std::string_view::npos ? std::string_view("1")
                                                              : s.substr(slash + 1);
        if (!is_integer_token(ns, true) || !is_integer_token(ds, false)) fail();
        BigInt n{std::string(ns)};
        BigInt d{std::string(ds)};
        if (d == 0) fail();
        return Rational(std::move(n), std::move(d));
    }

    /// "p" when integral, "p/q" otherwise.
    std::string str() const {
        std::string s = num_.str();
        if (den_ != 1) {
            s += '/';
            s += den_.str();
        }
        return s;
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r);

private:
    static Rational raw(BigInt n, BigInt d) {
        Rational r;
        r.num_ = std::move(n);
        r.den_ = std::move(d);
        return r;
    }

    static bool is_integer_token(std::string_view t, bool allow_sign) {
        if (allow_sign && !t.empty() && t.front() == '-') t.remove_prefix(1);
        if (t.empty()) return false;
        for (char c : t)
            if (c < '0' || c > '9') return false;
        return true;
    }

    void canonicalize() {
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        if (num_ == 0) {
            den_ = 1;
            return;
        }
        BigInt g = boost::multiprecision::gcd(num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
    }

    BigInt num_;
    BigInt den_;
};

inline std::ostream& operator<<(std::ostream& os, const Rational& r) {
    os << r.num_;
    if (r.den_ != 1) os << '/' << r.den_;
    return os;
}

} // namespace equiloc
