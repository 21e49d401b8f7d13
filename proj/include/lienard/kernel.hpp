#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "lienard/errors.hpp"
#include "lienard/quadrature.hpp"
#include "lienard/roots.hpp"

namespace lienard {

// ---------------------------------------------------------------------------
// Regimes and w-domains
// ---------------------------------------------------------------------------

enum class RegimeTag { KAboveQuarter, KQuarter, KBelowQuarter, KZero };

/// Analytic regime of the kernel, split by the discriminant of w^2 + w + k.
/// Inside the transition band around k = 1/4 the limit form is used: the
/// 1/sqrt(|4k-1|) factors of the neighbouring branches drown in rounding
/// noise there.
struct KernelRegime {
    RegimeTag tag;
    double k;
    double transition_band = 1e-6;

    static KernelRegime classify(double k, double band = 1e-6) {
        if (k == 0.0) return {RegimeTag::KZero, k, band};
        if (std::abs(k - 0.25) <= band) return {RegimeTag::KQuarter, k, band};
        if (k > 0.25) return {RegimeTag::KAboveQuarter, k, band};
        return {RegimeTag::KBelowQuarter, k, band};
    }
};

inline const char* regime_name(RegimeTag t) {
    switch (t) {
        case RegimeTag::KAboveQuarter: return "k>1/4";
        case RegimeTag::KQuarter: return "k=1/4";
        case RegimeTag::KBelowQuarter: return "k<1/4";
        default: return "k=0";
    }
}

/// Real roots of w(w^2+w+k) = 0, ascending: the poles of dF/dw.
inline std::vector<double> kernel_poles(double k) {
    std::vector<double> p{0.0};
    double disc = 1.0 - 4.0 * k;
    if (disc == 0.0) {
        p.push_back(-0.5);
    } else if (disc > 0.0) {
        double q = std::sqrt(disc);
        p.push_back(0.5 * (-1.0 + q));
        p.push_back(0.5 * (-1.0 - q));
    }
    std::sort(p.begin(), p.end());
    p.erase(std::unique(p.begin(), p.end()), p.end());
    return p;
}

/// Working interval in w with the excluded kernel poles inside it. F is only
/// evaluated strictly between consecutive poles.
struct WDomain {
    double lo;
    double hi;
    std::vector<double> excluded;

    static WDomain for_k(double k, double lo, double hi) {
        WDomain d{lo, hi, {}};
        for (double p : kernel_poles(k))
            if (p >= lo && p <= hi) d.excluded.push_back(p);
        return d;
    }
    bool pole_free() const { return excluded.empty(); }
    bool pole_inside(double a, double b, double* where = nullptr) const {
        double m = std::min(a, b), M = std::max(a, b);
        for (double p : excluded)
            if (p >= m && p <= M) {
                if (where) *where = p;
                return true;
            }
        return false;
    }
};

/// Maximal pole-free interval of w(w^2+w+k) containing w.
struct WComponent {
    double lo;
    double hi;
    bool touches(double p) const { return lo == p || hi == p; }
};

inline WComponent component_of(double w, double k) {
    auto poles = kernel_poles(k);
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (double p : poles) {
        if (p < w) lo = p;
        if (p > w && hi > p) hi = p;
        if (p == w) throw PoleError("component_of: w is a kernel pole", w);
    }
    return {lo, hi};
}

// ---------------------------------------------------------------------------
// The kernel F(w,k) = k * integral dw / (w (w^2+w+k))
// ---------------------------------------------------------------------------
//
// Closed forms per regime (log space, absolute values on one real branch):
//   k>1/4 : ln|w| - ln(w^2+w+k)/2 - atan((1+2w)/rt)/rt,        rt = sqrt(4k-1)
//   k=1/4 : ln|2w/(1+2w)| + 1/(1+2w)
//   k<1/4 : ln|w| - ln|w^2+w+k|/2
//           + ( ln|1+(1+2w)/q| - ln|1-(1+2w)/q| ) / (2q),       q = sqrt(1-4k)
// All three differentiate to k / (w (w^2+w+k)).

namespace detail {

// Cancellation-free evaluation for large |w| via s = 1/w and log1p.
inline double F_large_w(double s, double k, RegimeTag tag) {
    double base = -0.5 * std::log1p(s + k * s * s);
    switch (tag) {
        case RegimeTag::KAboveQuarter: {
            double rt = std::sqrt(4.0 * k - 1.0);
            double half_pi = std::copysign(M_PI / 2.0, s);
            return base - (half_pi - std::atan(rt * s / (s + 2.0))) / rt;
        }
        case RegimeTag::KQuarter:
            return -std::log1p(0.5 * s) + s / (s + 2.0);
        case RegimeTag::KBelowQuarter: {
            double q = std::sqrt(1.0 - 4.0 * k);
            return base + (std::log1p(0.5 * s * (1.0 + q)) -
                           std::log1p(-0.5 * s * (q - 1.0))) / (2.0 * q);
        }
        default:
            throw std::invalid_argument("F: k=0 regime has no kernel branch");
    }
}

} // namespace detail

/// Closed-form kernel value on one real branch. Throws PoleError at excluded
/// points of w(w^2+w+k) and on overflow near them.
inline double F_closed(double w, const KernelRegime& regime) {
    const double k = regime.tag == RegimeTag::KQuarter ? 0.25 : regime.k;
    if (regime.tag == RegimeTag::KZero)
        throw std::invalid_argument("F_closed: k=0 is handled by the k=0 solver branch");
    if (w == 0.0) throw PoleError("F_closed: w=0 is a logarithmic pole", w);

    double value;
    if (std::abs(w) > 1e4) {
        value = detail::F_large_w(1.0 / w, k, regime.tag);
    } else {
        switch (regime.tag) {
            case RegimeTag::KAboveQuarter: {
                double rt = std::sqrt(4.0 * k - 1.0);
                value = std::log(std::abs(w)) - 0.5 * std::log(w * w + w + k) -
                        std::atan((1.0 + 2.0 * w) / rt) / rt;
                break;
            }
            case RegimeTag::KQuarter: {
                double u = 1.0 + 2.0 * w;
                if (u == 0.0) throw PoleError("F_closed: w=-1/2 is a kernel pole (k=1/4)", w);
                value = std::log(std::abs(2.0 * w / u)) + 1.0 / u;
                break;
            }
            default: {
                double q = std::sqrt(1.0 - 4.0 * k);
                double u = (1.0 + 2.0 * w) / q;
                double quad = w * w + w + k;
                if (quad == 0.0 || std::abs(u) == 1.0)
                    throw PoleError("F_closed: w is a root of w^2+w+k", w);
                value = std::log(std::abs(w)) - 0.5 * std::log(std::abs(quad)) +
                        (std::log(std::abs(1.0 + u)) - std::log(std::abs(1.0 - u))) / (2.0 * q);
                break;
            }
        }
    }
    if (!std::isfinite(value))
        throw PoleError("F_closed: overflow near a kernel pole at w=" + std::to_string(w), w);
    return value;
}

inline double F_closed(double w, double k) { return F_closed(w, KernelRegime::classify(k)); }

/// dF/dw = k / (w (w^2+w+k)).
inline double F_derivative(double w, double k) { return k / (w * (w * w + w + k)); }

/// Limit of F as w -> sign*infinity: -sign*pi/(2 sqrt(4k-1)) above the
/// quarter split, 0 at and below it.
inline double F_limit_infinity(double k, int sign) {
    KernelRegime r = KernelRegime::classify(k);
    if (r.tag == RegimeTag::KAboveQuarter)
        return -double(sign) * M_PI / (2.0 * std::sqrt(4.0 * k - 1.0));
    if (r.tag == RegimeTag::KZero)
        throw std::invalid_argument("F_limit_infinity: k=0");
    return 0.0;
}

/// c0(k) = lim_{w->0} (F(w,k) - ln|w|): the additive constant of the
/// logarithmic pole at w = 0. Used to continue through g/f sign changes,
/// where w -> 0 while F - ln|w| stays finite.
inline double F_log_offset_at_zero(double k) {
    KernelRegime r = KernelRegime::classify(k);
    switch (r.tag) {
        case RegimeTag::KAboveQuarter: {
            double rt = std::sqrt(4.0 * k - 1.0);
            return -0.5 * std::log(k) - std::atan(1.0 / rt) / rt;
        }
        case RegimeTag::KQuarter:
            return std::log(2.0) + 1.0;
        case RegimeTag::KBelowQuarter: {
            double q = std::sqrt(1.0 - 4.0 * k);
            return -0.5 * std::log(std::abs(k)) +
                   0.5 * std::log(std::abs((q + 1.0) / (q - 1.0))) / q;
        }
        default:
            throw std::invalid_argument("F_log_offset_at_zero: k=0");
    }
}

/// Quadrature oracle: k * integral_{w_ref}^{w} ds / (s (s^2+s+k)), absolute
/// tolerance 1e-11. Equals F_closed(w) - F_closed(w_ref) on a pole-free
/// interval; the independent route pins the closed forms.
inline double F_quadrature(double w, double w_ref, double k, double tol = 1e-11) {
    double where = 0.0;
    auto dom = WDomain::for_k(k, std::min(w, w_ref), std::max(w, w_ref));
    if (dom.pole_inside(w_ref, w, &where))
        throw PoleError("F_quadrature: kernel pole inside the integration interval", where);
    return adaptive_quadrature(
        [k](double s) { return k / (s * (s * s + s + k)); }, w_ref, w, tol);
}

/// G0(s,k1,k2) difference: integral_{s_ref}^{s} du / (u^3+u^2+k1 u+k2),
/// tolerance 1e-11. Real roots of the cubic inside the interval are poles.
inline double G0(double s, double s_ref, double k1, double k2, double tol = 1e-11) {
    auto roots = cubic_real_roots(1.0, k1, k2);
    double m = std::min(s, s_ref), M = std::max(s, s_ref);
    for (double r : roots)
        if (r >= m && r <= M) {
            std::string list;
            for (double rr : roots) list += (list.empty() ? "" : ", ") + std::to_string(rr);
            throw PoleError("G0: real root of s^3+s^2+k1 s+k2 inside interval (roots: " + list + ")", r);
        }
    return adaptive_quadrature(
        [k1, k2](double u) { return 1.0 / (((u + 1.0) * u + k1) * u + k2); }, s_ref, s, tol);
}

// ---------------------------------------------------------------------------
// Inversion of F on one monotone component
// ---------------------------------------------------------------------------

/// Solves F(w,k) = target for w inside the component. F is strictly monotone
/// between consecutive poles, so a sign-change bracket always pins the root;
/// the expansion walks toward the required end (geometric toward +-infinity,
/// bisection toward a pole). Very negative targets near a 0-endpoint use the
/// logarithmic asymptote w = +-exp(target - c0(k)) directly.
inline double invert_F(double target, double k, const WComponent& comp, double seed) {
    KernelRegime regime = KernelRegime::classify(k);
    if (comp.touches(0.0) && target < F_log_offset_at_zero(k) - 36.0)
        return comp.hi == 0.0 ? -std::exp(target - F_log_offset_at_zero(k))
                              : std::exp(target - F_log_offset_at_zero(k));

    auto F = [&](double w) { return F_closed(w, regime) - target; };
    double a = seed;
    double fa = F(a);
    if (fa == 0.0) return a;
    // Direction of increase of F at the seed.
    double rising = F_derivative(a, k) > 0.0 ? 1.0 : -1.0;
    bool go_up = (fa < 0.0) == (rising > 0.0); // move toward larger w?
    double b = a, fb = fa;
    for (int i = 0; i < 4000; ++i) {
        double end = go_up ? comp.hi : comp.lo;
        if (std::isinf(end)) {
            b = go_up ? (b >= 1.0 ? 2.0 * b : (b <= -1.0 ? 0.5 * b : b + 1.0))
                      : (b <= -1.0 ? 2.0 * b : (b >= 1.0 ? 0.5 * b : b - 1.0));
            if (std::abs(b) > 1e280)
                throw BracketError("invert_F: target outside the component's F range");
        } else {
            b = end + 0.5 * (b - end);
            if (b == end || std::abs(b - end) < 1e-300)
                throw BracketError("invert_F: target outside the component's F range");
        }
        fb = F(b);
        if (fb == 0.0) return b;
        if ((fa > 0.0) != (fb > 0.0))
            return bracketed_root(F, std::min(a, b), std::max(a, b), 1e-15);
        a = b;
        fa = fb;
    }
    throw BracketError("invert_F: bracket expansion exhausted");
}

} // namespace lienard
