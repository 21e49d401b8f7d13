#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>

#include "lienard/errors.hpp"
#include "lienard/polynomial.hpp"
#include "lienard/quadrature.hpp"

namespace lienard {

struct Interval {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    bool contains(double x) const { return x >= lo && x <= hi; }
    bool is_finite() const { return std::isfinite(lo) && std::isfinite(hi); }
    double clamp(double x) const { return std::min(std::max(x, lo), hi); }
};

/// Central finite-difference step: cbrt(eps) balances truncation against
/// roundoff for first derivatives. Fixed, not tunable per call.
inline double fd_step(double x) {
    static const double h0 = std::cbrt(std::numeric_limits<double>::epsilon());
    return h0 * std::max(1.0, std::abs(x));
}

/// Deterministic black-box evaluator with optional analytic derivative and a
/// declared domain. Evaluators must be pure: same x, same value.
struct BlackBox {
    std::function<double(double)> eval;
    std::function<double(double)> deriv;   // empty -> central differences
    Interval domain;
    std::string label;
    std::optional<double> anchor;          // set on quadrature-backed antiderivatives
};

/// A coefficient function f(x) or g(x): exact polynomial or black box.
/// Immutable after construction; all operations are pure.
class FunctionSpec {
public:
    FunctionSpec() : impl_(Polynomial{}) {}
    FunctionSpec(Polynomial p) : impl_(std::move(p)) {}
    FunctionSpec(BlackBox b) : impl_(std::move(b)) {
        if (!std::get<BlackBox>(impl_).eval)
            throw std::invalid_argument("FunctionSpec: black box without evaluator");
    }

    static FunctionSpec constant(double c) {
        return FunctionSpec(Polynomial::constant(Rational::from_double(c)));
    }

    bool is_polynomial() const { return std::holds_alternative<Polynomial>(impl_); }
    const Polynomial& poly() const { return std::get<Polynomial>(impl_); }
    const BlackBox& black_box() const { return std::get<BlackBox>(impl_); }
    bool has_analytic_derivative() const {
        return is_polynomial() || static_cast<bool>(std::get<BlackBox>(impl_).deriv);
    }
    Interval domain() const {
        return is_polynomial() ? Interval{} : std::get<BlackBox>(impl_).domain;
    }
    std::string label() const {
        return is_polynomial() ? poly().str() : std::get<BlackBox>(impl_).label;
    }

    double operator()(double x) const {
        if (const auto* p = std::get_if<Polynomial>(&impl_)) return (*p)(x);
        const auto& b = std::get<BlackBox>(impl_);
        if (!b.domain.contains(x))
            throw DomainError("FunctionSpec: x=" + std::to_string(x) +
                              " outside declared domain of " + (b.label.empty() ? "black box" : b.label), x);
        return b.eval(x);
    }

    /// Derivative value at x: exact for polynomials, analytic callback when
    /// declared, otherwise central differences with the fixed step.
    double derivative_at(double x) const {
        if (const auto* p = std::get_if<Polynomial>(&impl_)) return p->derivative()(x);
        const auto& b = std::get<BlackBox>(impl_);
        if (b.deriv) return b.deriv(x);
        double h = fd_step(x);
        return ((*this)(x + h) - (*this)(x - h)) / (2.0 * h);
    }

    FunctionSpec derivative() const {
        if (const auto* p = std::get_if<Polynomial>(&impl_)) return FunctionSpec(p->derivative());
        BlackBox b = std::get<BlackBox>(impl_);
        FunctionSpec self = *this;
        BlackBox d;
        d.domain = b.domain;
        d.label = "d/dx(" + b.label + ")";
        d.eval = [self](double x) { return self.derivative_at(x); };
        return FunctionSpec(std::move(d));
    }

    /// Antiderivative F with F' = *this. Polynomials get the exact power-rule
    /// result (constant term 0); black boxes get a quadrature-backed evaluator
    /// anchored at x_ref (F(x_ref) = 0), with the anchor recorded in the spec.
    FunctionSpec antiderivative(double x_ref = 0.0) const {
        if (const auto* p = std::get_if<Polynomial>(&impl_)) return FunctionSpec(p->antiderivative());
        BlackBox b = std::get<BlackBox>(impl_);
        if (!b.domain.contains(x_ref))
            throw DomainError("FunctionSpec::antiderivative: anchor outside domain", x_ref);
        auto inner = b.eval;
        BlackBox a;
        a.domain = b.domain;
        a.anchor = x_ref;
        a.label = "integral(" + b.label + ") anchored at " + std::to_string(x_ref);
        a.eval = [inner, x_ref](double x) {
            return adaptive_quadrature(inner, x_ref, x, 1e-11);
        };
        a.deriv = inner;
        return FunctionSpec(std::move(a));
    }

private:
    std::variant<Polynomial, BlackBox> impl_;
};

/// Convenience: evaluate with the module-level name used in the contracts.
inline double evaluate(const FunctionSpec& s, double x) { return s(x); }

} // namespace lienard
