#pragma once

#include <cctype>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace lienard {

/// Exact rational number on 64-bit numerator/denominator.
///
/// Coefficient work in this library multiplies a handful of small rationals
/// (construction formulas, polynomial calculus), so fixed-width integers with
/// overflow detection are enough. Every operation normalizes (gcd-reduced,
/// denominator > 0) and throws std::overflow_error instead of wrapping.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(std::int64_t n) : num_(n), den_(1) {}
    Rational(std::int64_t n, std::int64_t d) : num_(n), den_(d) { normalize(); }

    /// Exact conversion: every finite double is a dyadic rational. Throws
    /// std::overflow_error when numerator or denominator exceeds 64 bits
    /// (exponents far from 1 — values this library never produces).
    static Rational from_double(double v) {
        if (!std::isfinite(v)) throw std::overflow_error("Rational::from_double: non-finite");
        if (v == 0.0) return Rational(0);
        int exp = 0;
        double m = std::frexp(v, &exp); // v = m * 2^exp, |m| in [0.5, 1)
        auto n = static_cast<std::int64_t>(std::ldexp(m, 53));
        exp -= 53;
        while (n != 0 && (n % 2) == 0) { n /= 2; ++exp; }
        Rational r(n);
        if (exp >= 0) {
            if (exp > 62) throw std::overflow_error("Rational::from_double: exponent too large");
            return r * Rational(std::int64_t(1) << exp);
        }
        if (exp < -62) throw std::overflow_error("Rational::from_double: exponent too small");
        return Rational(n, std::int64_t(1) << (-exp));
    }

    /// Parses "p", "p/q", or a decimal literal like "-0.25" (read exactly,
    /// e.g. 0.3 -> 3/10).
    static Rational parse(const std::string& text);

    std::int64_t numerator() const { return num_; }
    std::int64_t denominator() const { return den_; }

    double to_double() const { return double(num_) / double(den_); }
    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return den_ == 1; }

    Rational operator-() const { return Rational(checked_neg(num_), den_, already_normalized{}); }

    friend Rational operator+(const Rational& a, const Rational& b) {
        // a/b + c/d with d1 = gcd(b, d): a*(d/d1) + c*(b/d1) over b*(d/d1)
        std::int64_t g = std::gcd(a.den_, b.den_);
        std::int64_t bd = a.den_ / g;
        std::int64_t dd = b.den_ / g;
        __int128 n = (__int128)a.num_ * dd + (__int128)b.num_ * bd;
        __int128 d = (__int128)a.den_ * dd;
        return make_checked(n, d);
    }
    friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
    friend Rational operator*(const Rational& a, const Rational& b) {
        std::int64_t g1 = std::gcd(std::abs(a.num_), b.den_);
        std::int64_t g2 = std::gcd(std::abs(b.num_), a.den_);
        __int128 n = (__int128)(a.num_ / g1) * (b.num_ / g2);
        __int128 d = (__int128)(a.den_ / g2) * (b.den_ / g1);
        return make_checked(n, d);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw std::domain_error("Rational: division by zero");
        return a * Rational(b.den_, b.num_);
    }

    Rational& operator+=(const Rational& o) { *this = *this + o; return *this; }
    Rational& operator-=(const Rational& o) { *this = *this - o; return *this; }
    Rational& operator*=(const Rational& o) { *this = *this * o; return *this; }
    Rational& operator/=(const Rational& o) { *this = *this / o; return *this; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return (__int128)a.num_ * b.den_ < (__int128)b.num_ * a.den_;
    }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    /// "p" for integers, "p/q" otherwise.
    std::string str() const {
        std::string s = std::to_string(num_);
        if (den_ != 1) s += "/" + std::to_string(den_);
        return s;
    }
    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    struct already_normalized {};
    Rational(std::int64_t n, std::int64_t d, already_normalized) : num_(n), den_(d) {}

    static std::int64_t checked_neg(std::int64_t v) {
        if (v == std::numeric_limits<std::int64_t>::min())
            throw std::overflow_error("Rational: negation overflow");
        return -v;
    }

    static Rational make_checked(__int128 n, __int128 d) {
        if (d == 0) throw std::domain_error("Rational: zero denominator");
        if (d < 0) { n = -n; d = -d; }
        __int128 g = gcd128(n < 0 ? -n : n, d);
        if (g > 1) { n /= g; d /= g; }
        constexpr __int128 lo = std::numeric_limits<std::int64_t>::min();
        constexpr __int128 hi = std::numeric_limits<std::int64_t>::max();
        if (n < lo || n > hi || d > hi)
            throw std::overflow_error("Rational: 64-bit overflow");
        return Rational((std::int64_t)n, (std::int64_t)d, already_normalized{});
    }

    static __int128 gcd128(__int128 a, __int128 b) {
        while (b != 0) { __int128 t = a % b; a = b; b = t; }
        return a;
    }

    void normalize() {
        if (den_ == 0) throw std::domain_error("Rational: zero denominator");
        if (den_ < 0) { num_ = checked_neg(num_); den_ = checked_neg(den_); }
        std::int64_t g = std::gcd(std::abs(num_), den_);
        if (g > 1) { num_ /= g; den_ /= g; }
        if (num_ == 0) den_ = 1;
    }

    std::int64_t num_;
    std::int64_t den_;
};

inline Rational Rational::parse(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw std::invalid_argument("Rational::parse: empty literal");
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        std::int64_t n = std::stoll(s.substr(0, slash));
        std::int64_t d = std::stoll(s.substr(slash + 1));
        return Rational(n, d);
    }
    auto dot = s.find('.');
    if (dot == std::string::npos) return Rational(std::stoll(s));
    bool neg = s[0] == '-';
    std::string digits = s;
    digits.erase(dot, 1);
    if (neg) digits.erase(0, 1);
    if (digits.empty()) throw std::invalid_argument("Rational::parse: bad literal '" + text + "'");
    size_t frac_digits = s.size() - dot - 1;
    if (digits.size() > 18) throw std::overflow_error("Rational::parse: too many digits");
    std::int64_t n = digits.empty() ? 0 : std::stoll(digits);
    std::int64_t d = 1;
    for (size_t i = 0; i < frac_digits; ++i) d *= 10;
    return Rational(neg ? -n : n, d);
}

} // namespace lienard
