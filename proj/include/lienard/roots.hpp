#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lienard/errors.hpp"

namespace lienard {

/// Brent's method on [lo, hi] with fn(lo)*fn(hi) < 0. Converges when the
/// bracket width shrinks below tol*max(1,|x|) or |fn(x)| <= tol. Superlinear
/// (inverse quadratic / secant) steps with bisection fallback.
template <class F>
double bracketed_root(F&& fn, double lo, double hi, double tol = 1e-12) {
    double a = lo, b = hi;
    double fa = fn(a), fb = fn(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (!std::isfinite(fa) || !std::isfinite(fb))
        throw BracketError("bracketed_root: non-finite endpoint value");
    if ((fa > 0.0) == (fb > 0.0))
        throw BracketError("bracketed_root: no sign change on [" + std::to_string(lo) +
                           ", " + std::to_string(hi) + "]");
    double c = a, fc = fa;
    double d = b - a, e = d;
    for (int iter = 0; iter < 200; ++iter) {
        if ((fb > 0.0) == (fc > 0.0)) { c = a; fc = fa; d = b - a; e = d; }
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        double tol1 = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b) +
                      0.5 * tol * std::max(1.0, std::abs(b));
        double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0 || std::abs(fb) <= tol) return b;
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            double s = fb / fa, p, q;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                double r = fb / fc;
                double t = fa / fc;
                p = s * (2.0 * xm * t * (t - r) - (b - a) * (r - 1.0));
                q = (t - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d; d = p / q;
            } else {
                d = xm; e = d;
            }
        } else {
            d = xm; e = d;
        }
        a = b; fa = fb;
        b += std::abs(d) > tol1 ? d : (xm > 0.0 ? tol1 : -tol1);
        fb = fn(b);
        if (!std::isfinite(fb))
            throw BracketError("bracketed_root: non-finite value at x=" + std::to_string(b));
    }
    return b;
}

/// Expands an interval around x0 (step doubling each try, two-sided) until fn
/// changes sign. Returns the bracket or nullopt when none is found.
template <class F>
std::optional<std::pair<double, double>> expand_bracket(F&& fn, double x0, double step,
                                                        int max_doublings = 60,
                                                        double lo_limit = -1e300,
                                                        double hi_limit = 1e300) {
    double f0 = fn(x0);
    if (!std::isfinite(f0)) return std::nullopt;
    if (f0 == 0.0) return std::pair{x0, x0};
    double h = std::abs(step);
    if (h == 0.0) h = 1e-8;
    double last_lo = x0, last_hi = x0;
    for (int i = 0; i < max_doublings; ++i) {
        double hi = std::min(x0 + h, hi_limit);
        if (hi > last_hi) {
            double f = fn(hi);
            if (std::isfinite(f) && (f > 0.0) != (f0 > 0.0)) return std::pair{last_hi, hi};
            if (std::isfinite(f)) last_hi = hi;
        }
        double lo = std::max(x0 - h, lo_limit);
        if (lo < last_lo) {
            double f = fn(lo);
            if (std::isfinite(f) && (f > 0.0) != (f0 > 0.0)) return std::pair{lo, last_lo};
            if (std::isfinite(f)) last_lo = lo;
        }
        if (last_lo <= lo_limit && last_hi >= hi_limit) break;
        h *= 2.0;
    }
    return std::nullopt;
}

/// Real roots of t^3 + p t^2 + q t + r, ascending, multiplicities merged.
/// Trigonometric form for three real roots, Cardano otherwise.
inline std::vector<double> cubic_real_roots(double p, double q, double r) {
    const double p2 = p * p;
    const double Q = (p2 - 3.0 * q) / 9.0;
    const double R = (p * (2.0 * p2 - 9.0 * q) + 27.0 * r) / 54.0;
    const double R2 = R * R;
    const double Q3 = Q * Q * Q;
    std::vector<double> roots;
    if (R2 < Q3) {
        double t = std::acos(std::clamp(R / std::sqrt(Q3), -1.0, 1.0));
        double m = -2.0 * std::sqrt(Q);
        roots = {m * std::cos(t / 3.0) - p / 3.0,
                 m * std::cos((t + 2.0 * M_PI) / 3.0) - p / 3.0,
                 m * std::cos((t - 2.0 * M_PI) / 3.0) - p / 3.0};
    } else {
        double A = -std::cbrt(R + std::copysign(std::sqrt(std::max(R2 - Q3, 0.0)), R));
        double B = A == 0.0 ? 0.0 : Q / A;
        roots = {A + B - p / 3.0};
        // Double root when the discriminant vanishes.
        if (R2 == Q3 && A != 0.0) roots.push_back(-0.5 * (A + B) - p / 3.0);
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    // One Newton polish per root.
    for (double& x : roots) {
        double fx = ((x + p) * x + q) * x + r;
        double dfx = (3.0 * x + 2.0 * p) * x + q;
        if (dfx != 0.0 && std::isfinite(fx / dfx)) x -= fx / dfx;
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

} // namespace lienard
