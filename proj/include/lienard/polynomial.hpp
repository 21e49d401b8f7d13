#pragma once

#include <initializer_list>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "lienard/rational.hpp"

namespace lienard {

/// Dense univariate polynomial with exact rational coefficients, ascending
/// degree. The coefficient list is never empty; trailing zeros are stripped,
/// so the zero polynomial is stored as {0}.
class Polynomial {
public:
    Polynomial() : coeffs_{Rational(0)} {}
    Polynomial(std::initializer_list<Rational> cs) : coeffs_(cs) { normalize(); }
    explicit Polynomial(std::vector<Rational> cs) : coeffs_(std::move(cs)) { normalize(); }

    static Polynomial constant(const Rational& c) { return Polynomial{c}; }
    /// c0 + c1 x  (convenience for the linear coefficient families).
    static Polynomial linear(const Rational& c0, const Rational& c1) { return Polynomial{c0, c1}; }

    const std::vector<Rational>& coeffs() const { return coeffs_; }
    /// Degree of the zero polynomial is 0 by convention.
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.size() == 1 && coeffs_[0].is_zero(); }
    const Rational& coeff(int i) const {
        static const Rational zero(0);
        return i >= 0 && i < static_cast<int>(coeffs_.size()) ? coeffs_[size_t(i)] : zero;
    }
    const Rational& leading() const { return coeffs_.back(); }

    /// Horner evaluation; rationals convert to double at this boundary only.
    double operator()(double x) const {
        double acc = coeffs_.back().to_double();
        for (size_t i = coeffs_.size() - 1; i-- > 0;)
            acc = acc * x + coeffs_[i].to_double();
        return acc;
    }

    /// Exact evaluation at a rational point.
    Rational at(const Rational& x) const {
        Rational acc = coeffs_.back();
        for (size_t i = coeffs_.size() - 1; i-- > 0;)
            acc = acc * x + coeffs_[i];
        return acc;
    }

    Polynomial derivative() const {
        if (coeffs_.size() == 1) return Polynomial{};
        std::vector<Rational> d(coeffs_.size() - 1);
        for (size_t i = 1; i < coeffs_.size(); ++i)
            d[i - 1] = coeffs_[i] * Rational(std::int64_t(i));
        return Polynomial(std::move(d));
    }

    /// Antiderivative with constant term 0.
    Polynomial antiderivative() const {
        std::vector<Rational> a(coeffs_.size() + 1);
        a[0] = Rational(0);
        for (size_t i = 0; i < coeffs_.size(); ++i)
            a[i + 1] = coeffs_[i] / Rational(std::int64_t(i + 1));
        return Polynomial(std::move(a));
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
        std::vector<Rational> c(std::max(a.coeffs_.size(), b.coeffs_.size()), Rational(0));
        for (size_t i = 0; i < a.coeffs_.size(); ++i) c[i] += a.coeffs_[i];
        for (size_t i = 0; i < b.coeffs_.size(); ++i) c[i] += b.coeffs_[i];
        return Polynomial(std::move(c));
    }
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
        std::vector<Rational> c(std::max(a.coeffs_.size(), b.coeffs_.size()), Rational(0));
        for (size_t i = 0; i < a.coeffs_.size(); ++i) c[i] += a.coeffs_[i];
        for (size_t i = 0; i < b.coeffs_.size(); ++i) c[i] -= b.coeffs_[i];
        return Polynomial(std::move(c));
    }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        if (a.is_zero() || b.is_zero()) return Polynomial{};
        std::vector<Rational> c(a.coeffs_.size() + b.coeffs_.size() - 1, Rational(0));
        for (size_t i = 0; i < a.coeffs_.size(); ++i)
            for (size_t j = 0; j < b.coeffs_.size(); ++j)
                c[i + j] += a.coeffs_[i] * b.coeffs_[j];
        return Polynomial(std::move(c));
    }
    friend Polynomial operator*(const Rational& s, const Polynomial& p) {
        std::vector<Rational> c(p.coeffs_);
        for (auto& v : c) v *= s;
        return Polynomial(std::move(c));
    }

    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        return a.coeffs_ == b.coeffs_;
    }
    friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

    /// Exact Euclidean division: returns {quotient, remainder}.
    std::pair<Polynomial, Polynomial> divmod(const Polynomial& d) const {
        if (d.is_zero()) throw std::domain_error("Polynomial::divmod: division by zero polynomial");
        std::vector<Rational> rem(coeffs_);
        int dd = d.degree();
        int qn = degree() - dd;
        if (qn < 0) return {Polynomial{}, *this};
        std::vector<Rational> q(size_t(qn) + 1, Rational(0));
        for (int i = qn; i >= 0; --i) {
            Rational c = rem[size_t(i + dd)] / d.leading();
            q[size_t(i)] = c;
            if (c.is_zero()) continue;
            for (int j = 0; j <= dd; ++j)
                rem[size_t(i + j)] -= c * d.coeff(j);
        }
        rem.resize(size_t(std::max(dd, 1)));
        return {Polynomial(std::move(q)), Polynomial(std::move(rem))};
    }

    /// Quotient when the division is exact, nullopt otherwise.
    std::optional<Polynomial> divide_exact(const Polynomial& d) const {
        auto [q, r] = divmod(d);
        if (!r.is_zero()) return std::nullopt;
        return q;
    }

    /// Readable form, e.g. "1/2 x^3 + 2 x + 1".
    std::string str() const {
        if (is_zero()) return "0";
        std::string out;
        for (size_t i = coeffs_.size(); i-- > 0;) {
            const Rational& c = coeffs_[i];
            if (c.is_zero()) continue;
            Rational a = c;
            if (!out.empty()) {
                out += (a < Rational(0)) ? " - " : " + ";
                if (a < Rational(0)) a = -a;
            }
            bool unit = (a == Rational(1)) && i > 0;
            if (!unit) out += a.str();
            if (i > 0) {
                if (!unit) out += " ";
                out += "x";
                if (i > 1) out += "^" + std::to_string(i);
            }
        }
        return out;
    }
    friend std::ostream& operator<<(std::ostream& os, const Polynomial& p) { return os << p.str(); }

private:
    void normalize() {
        while (coeffs_.size() > 1 && coeffs_.back().is_zero()) coeffs_.pop_back();
        if (coeffs_.empty()) coeffs_.push_back(Rational(0));
    }

    std::vector<Rational> coeffs_;
};

} // namespace lienard
