#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "lienard/errors.hpp"
#include "lienard/function_spec.hpp"
#include "lienard/kernel.hpp"

namespace lienard {

/// The pair (f, g) of  x'' + f(x) x' + g(x) = 0.  f must not vanish on the
/// working subinterval used for checking/solving.
struct LienardSystem {
    FunctionSpec f;
    FunctionSpec g;
    Interval domain;
};

/// Outcome of testing d/dx(g/f) = k f. Exact certificates come from rational
/// polynomial division; numeric ones report the median-of-ratios estimate and
/// the worst grid residual.
struct ChielliniCertificate {
    bool holds = false;
    double k = 0.0;
    double residual = 0.0;
    std::vector<double> grid;
    double tolerance = 0.0;
    bool exact = false;
    /// k ~ 0: the condition holds but the parametric solver needs the
    /// dedicated k=0 branch (g = A f family).
    bool degenerate_k_zero = false;
};

/// Four-coefficient Abel equation v' = a + b v + f v^2 + g v^3.
struct GeneralAbel {
    FunctionSpec a;
    FunctionSpec b;
    FunctionSpec f;
    FunctionSpec g;
    Interval domain;
};

struct Lemma2Certificate {
    bool holds = false;
    double k1 = 0.0;
    double k2 = 0.0;
    double residual1 = 0.0; // condition d/dx(g e^B / f) = k1 f e^B, stated e^B-free
    double residual2 = 0.0; // condition a = k2 f^3 / g^2
    std::vector<double> grid;
    double tolerance = 0.0;
};

struct StandardAbelPair {
    FunctionSpec A;
    FunctionSpec B;
};

namespace detail {

inline std::vector<double> check_grid(const Interval& domain, int n) {
    if (n < 8) throw std::invalid_argument("check grid: grid_size must be >= 8");
    Interval window = domain;
    if (!window.is_finite()) {
        // Default desk-scale window when the system is declared on all of R.
        window.lo = std::isfinite(domain.lo) ? domain.lo : -1.0;
        window.hi = std::isfinite(domain.hi) ? domain.hi : 1.0;
    }
    std::vector<double> xs(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        xs[size_t(i)] = window.lo + (window.hi - window.lo) * double(i) / double(n - 1);
    return xs;
}

inline double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

/// d/dx (g/f) at x: product rule when both derivatives are analytic,
/// otherwise central differences of the ratio itself.
inline double ratio_derivative(const FunctionSpec& f, const FunctionSpec& g, double x) {
    double fx = f(x);
    if (fx == 0.0) throw SingularError("f vanishes at grid point x=" + std::to_string(x), x);
    if (f.has_analytic_derivative() && g.has_analytic_derivative())
        return (g.derivative_at(x) * fx - g(x) * f.derivative_at(x)) / (fx * fx);
    double h = fd_step(x);
    return (g(x + h) / f(x + h) - g(x - h) / f(x - h)) / (2.0 * h);
}

inline bool all_analytic(std::initializer_list<const FunctionSpec*> specs) {
    for (const auto* s : specs)
        if (!s->has_analytic_derivative()) return false;
    return true;
}

} // namespace detail

/// Tests the integrability condition d/dx(g/f) = k f and estimates k as the
/// median of the pointwise ratios over the grid. Polynomial pairs where f
/// divides g exactly are certified coefficient-wise in rational arithmetic.
inline ChielliniCertificate check_chiellini(const LienardSystem& sys, int grid_size = 64) {
    ChielliniCertificate cert;
    cert.grid = detail::check_grid(sys.domain, grid_size);

    if (sys.f.is_polynomial() && sys.g.is_polynomial() && !sys.f.poly().is_zero()) {
        try {
            if (auto q = sys.g.poly().divide_exact(sys.f.poly())) {
                Polynomial qd = q->derivative();
                const Polynomial& f = sys.f.poly();
                Rational k = qd.coeff(f.degree()) / f.leading();
                if (qd - k * f == Polynomial{}) {
                    cert.holds = true;
                    cert.exact = true;
                    cert.k = k.to_double();
                    cert.residual = 0.0;
                    cert.tolerance = 1e-9;
                    cert.degenerate_k_zero = k.is_zero();
                    return cert;
                }
            }
        } catch (const std::overflow_error&) {
            // Rational arithmetic overflowed (large dyadic coefficients);
            // the numeric path below settles it.
        }
    }

    std::vector<double> kappa;
    kappa.reserve(cert.grid.size());
    for (double x : cert.grid) {
        double fx = sys.f(x);
        if (fx == 0.0) throw SingularError("check_chiellini: f vanishes at x=" + std::to_string(x), x);
        double d = detail::ratio_derivative(sys.f, sys.g, x);
        if (!std::isfinite(d))
            throw SingularError("check_chiellini: d/dx(g/f) not finite at x=" + std::to_string(x), x);
        kappa.push_back(d / fx);
    }
    cert.k = detail::median(kappa);
    for (double x : cert.grid)
        cert.residual = std::max(cert.residual,
                                 std::abs(detail::ratio_derivative(sys.f, sys.g, x) - cert.k * sys.f(x)));
    cert.tolerance = detail::all_analytic({&sys.f, &sys.g}) ? 1e-9 : 1e-6;
    cert.holds = cert.residual <= cert.tolerance;
    cert.degenerate_k_zero = cert.holds && std::abs(cert.k) < 1e-8;
    return cert;
}

/// g = f (C1 + k * integral f), exact in rational arithmetic.
inline Polynomial construct_g_from_f(const Polynomial& f, const Rational& k, const Rational& C1) {
    return f * (Polynomial::constant(C1) + k * f.antiderivative());
}

/// Same construction through doubles. Polynomial inputs stay polynomial
/// (coefficients are exact dyadic rationals of the computed doubles); black
/// boxes get a quadrature-backed integral anchored at 0.
inline FunctionSpec construct_g_from_f(const FunctionSpec& f, double k, double C1) {
    if (f.is_polynomial()) {
        try {
            return FunctionSpec(construct_g_from_f(f.poly(), Rational::from_double(k),
                                                   Rational::from_double(C1)));
        } catch (const std::overflow_error&) {
            // fall through to the black-box route
        }
    }
    FunctionSpec intf = f.antiderivative(0.0);
    BlackBox g;
    g.domain = f.domain();
    g.label = "f*(C1+k*int f) with k=" + std::to_string(k) + ", C1=" + std::to_string(C1);
    g.eval = [f, intf, k, C1](double x) { return f(x) * (C1 + k * intf(x)); };
    if (f.has_analytic_derivative())
        g.deriv = [f, intf, k, C1](double x) {
            double fx = f(x);
            return f.derivative_at(x) * (C1 + k * intf(x)) + k * fx * fx;
        };
    return FunctionSpec(std::move(g));
}

/// f = sign * g / sqrt(C2 + 2k * integral g). The result is a black box whose
/// evaluations reject radicand <= 0; when check is given, the radicand is also
/// screened on that interval up front.
inline FunctionSpec construct_f_from_g(const FunctionSpec& g, double k, double C2, int sign = +1,
                                       std::optional<Interval> check = std::nullopt) {
    if (sign != 1 && sign != -1)
        throw std::invalid_argument("construct_f_from_g: sign must be +1 or -1");
    FunctionSpec intg = g.antiderivative(0.0);
    auto radicand = [intg, k, C2](double x) { return C2 + 2.0 * k * intg(x); };
    if (check) {
        for (int i = 0; i <= 128; ++i) {
            double x = check->lo + (check->hi - check->lo) * double(i) / 128.0;
            if (radicand(x) <= 0.0)
                throw DomainError("construct_f_from_g: C2 + 2k*int g <= 0 at x=" + std::to_string(x), x);
        }
    }
    BlackBox f;
    f.domain = g.domain();
    f.label = std::string(sign > 0 ? "+" : "-") + "g/sqrt(C2+2k*int g), k=" +
              std::to_string(k) + ", C2=" + std::to_string(C2);
    double s = double(sign);
    f.eval = [g, radicand, s](double x) {
        double r = radicand(x);
        if (r <= 0.0)
            throw DomainError("construct_f_from_g: radicand <= 0 at x=" + std::to_string(x), x);
        return s * g(x) / std::sqrt(r);
    };
    if (g.has_analytic_derivative())
        f.deriv = [g, radicand, k, s](double x) {
            double r = radicand(x);
            if (r <= 0.0)
                throw DomainError("construct_f_from_g: radicand <= 0 at x=" + std::to_string(x), x);
            double gx = g(x);
            return s * (g.derivative_at(x) / std::sqrt(r) - k * gx * gx / (r * std::sqrt(r)));
        };
    return FunctionSpec(std::move(f));
}

/// Tests the two Lemma-2 conditions and estimates (k1, k2) as grid medians.
/// The first condition is checked in its e^{int b}-free form
///   d/dx(g/f) + (g/f) b = k1 f,
/// which the exponential factor cancels out of.
inline Lemma2Certificate check_lemma2(const GeneralAbel& eq, int grid_size = 64) {
    Lemma2Certificate cert;
    cert.grid = detail::check_grid(eq.domain, grid_size);

    std::vector<double> kappa1, kappa2;
    kappa1.reserve(cert.grid.size());
    kappa2.reserve(cert.grid.size());
    for (double x : cert.grid) {
        double fx = eq.f(x);
        double gx = eq.g(x);
        if (fx == 0.0 || gx == 0.0)
            throw SingularError("check_lemma2: f or g vanishes at x=" + std::to_string(x), x);
        double lhs1 = detail::ratio_derivative(eq.f, eq.g, x) + (gx / fx) * eq.b(x);
        if (!std::isfinite(lhs1))
            throw SingularError("check_lemma2: condition 1 not finite at x=" + std::to_string(x), x);
        kappa1.push_back(lhs1 / fx);
        kappa2.push_back(eq.a(x) * gx * gx / (fx * fx * fx));
    }
    cert.k1 = detail::median(kappa1);
    cert.k2 = detail::median(kappa2);
    for (double x : cert.grid) {
        double fx = eq.f(x);
        double gx = eq.g(x);
        double lhs1 = detail::ratio_derivative(eq.f, eq.g, x) + (gx / fx) * eq.b(x);
        cert.residual1 = std::max(cert.residual1, std::abs(lhs1 - cert.k1 * fx));
        cert.residual2 = std::max(cert.residual2,
                                  std::abs(eq.a(x) - cert.k2 * fx * fx * fx / (gx * gx)));
    }
    cert.tolerance = detail::all_analytic({&eq.a, &eq.b, &eq.f, &eq.g}) ? 1e-9 : 1e-6;
    cert.holds = cert.residual1 <= cert.tolerance && cert.residual2 <= cert.tolerance;
    return cert;
}

using LevinsonSmithReduction = std::variant<StandardAbelPair, GeneralAbel>;

/// Reduction of  x'' + (gamma x'^2 + delta x' + f) x' + g = 0.
/// gamma == 0: returns the standard Abel pair (A, B) = (f e^{int delta},
/// g e^{2 int delta}) ready for check_chiellini; in particular delta == 0
/// returns (f, g) unchanged. Otherwise returns the GeneralAbel
/// (a, b, f, g) = (gamma, delta, f, g) ready for check_lemma2.
inline LevinsonSmithReduction reduce_levinson_smith(const FunctionSpec& gamma,
                                                    const FunctionSpec& delta,
                                                    const FunctionSpec& f,
                                                    const FunctionSpec& g,
                                                    Interval domain = {}) {
    bool gamma_zero = gamma.is_polynomial() && gamma.poly().is_zero();
    if (!gamma_zero) return GeneralAbel{gamma, delta, f, g, domain};
    bool delta_zero = delta.is_polynomial() && delta.poly().is_zero();
    if (delta_zero) return StandardAbelPair{f, g};

    FunctionSpec intd = delta.antiderivative(0.0);
    BlackBox A;
    A.domain = f.domain();
    A.label = "f*exp(int delta)";
    A.eval = [f, intd](double x) { return f(x) * std::exp(intd(x)); };
    if (f.has_analytic_derivative() && delta.has_analytic_derivative())
        A.deriv = [f, delta, intd](double x) {
            return (f.derivative_at(x) + f(x) * delta(x)) * std::exp(intd(x));
        };
    BlackBox B;
    B.domain = g.domain();
    B.label = "g*exp(2 int delta)";
    B.eval = [g, intd](double x) { return g(x) * std::exp(2.0 * intd(x)); };
    if (g.has_analytic_derivative() && delta.has_analytic_derivative())
        B.deriv = [g, delta, intd](double x) {
            return (g.derivative_at(x) + 2.0 * g(x) * delta(x)) * std::exp(2.0 * intd(x));
        };
    return StandardAbelPair{FunctionSpec(std::move(A)), FunctionSpec(std::move(B))};
}

} // namespace lienard
