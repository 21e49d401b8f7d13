#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lienard/errors.hpp"
#include "lienard/function_spec.hpp"
#include "lienard/integrability.hpp"
#include "lienard/interpolation.hpp"
#include "lienard/kernel.hpp"
#include "lienard/quadrature.hpp"
#include "lienard/roots.hpp"

namespace lienard {

struct InitialConditions {
    double x0;
    double xdot0;
};

/// Constants of one parametric arc: g/f = C^{-1} e^{F(w,k)} with time origin
/// t0. C_inv is negative on arcs where g/f < 0.
struct ChielliniParams {
    double k = 0.0;
    double C_inv = 1.0;
    double t0 = 0.0;
    KernelRegime regime = KernelRegime::classify(1.0);
};

struct FitResult {
    ChielliniParams params;
    double w0;
};

struct ParametricSample {
    double w;
    double x;
    double t;
    double xdot;
};

struct TimeSample {
    double t;
    double x;
    double xdot;
};

enum class ArcTermination {
    Completed,        // reached the requested w endpoint
    BracketLost,      // x(w) root could not be re-bracketed (branch fold)
    RadicandNegative, // closed-form inversion left its validity region
    DomainEdge,       // x left the system's domain
    AccuracyLoss,     // time quadrature or defining relation degraded
};

inline const char* arc_termination_name(ArcTermination t) {
    switch (t) {
        case ArcTermination::Completed: return "completed";
        case ArcTermination::BracketLost: return "bracket-lost";
        case ArcTermination::RadicandNegative: return "radicand-negative";
        case ArcTermination::DomainEdge: return "domain-edge";
        default: return "accuracy-loss";
    }
}

/// Exact parametric arc (w, x(w), t(w), xdot(w)), samples ascending in w.
/// Every sample satisfies g(x)/f(x) = C^{-1} e^{F(w,k)} and xdot = (g/f)/w.
/// t is strictly monotone along the arc; time_direction records sign(dt/dw).
struct ParametricSolution {
    std::vector<ParametricSample> samples;
    int branch_id = 0; // root index (ascending) picked at the anchor, -1 = bracket continuation
    std::pair<double, double> w_range{0.0, 0.0};
    ChielliniParams params;
    double w0 = 0.0;
    double x0 = 0.0;
    double xdot0 = 0.0;
    int time_direction = +1;
    ArcTermination lo_end = ArcTermination::Completed;
    ArcTermination hi_end = ArcTermination::Completed;
    std::string notes;

    double t_min() const { return std::min(samples.front().t, samples.back().t); }
    double t_max() const { return std::max(samples.front().t, samples.back().t); }
};

/// All real solutions x of g(x)/f(x) = rhs, ascending. Closed-form inverters
/// for the built-in families; absent one, the solver tracks a bracket.
using MultiRootInverter = std::function<std::vector<double>(double rhs)>;

// ---------------------------------------------------------------------------
// Initial conditions -> arc constants
// ---------------------------------------------------------------------------

/// w0 = (g/f)(x0) / xdot0,  C^{-1} = (g/f)(x0) e^{-F(w0,k)},  t0 = 0.
inline FitResult fit_initial_conditions(const LienardSystem& sys, double k,
                                        const InitialConditions& ic) {
    if (k == 0.0)
        throw std::invalid_argument("fit_initial_conditions: k=0 systems use solve_k_zero");
    if (ic.xdot0 == 0.0)
        throw std::invalid_argument("fit_initial_conditions: xdot0=0 (v=1/xdot does not exist)");
    double fx = sys.f(ic.x0);
    if (fx == 0.0)
        throw SingularError("fit_initial_conditions: f(x0)=0", ic.x0);
    double gf = sys.g(ic.x0) / fx;
    if (gf == 0.0 || !std::isfinite(gf))
        throw SingularError("fit_initial_conditions: g/f at x0 must be finite and nonzero", ic.x0);
    FitResult r;
    r.w0 = gf / ic.xdot0;
    r.params.k = k;
    r.params.regime = KernelRegime::classify(k);
    r.params.C_inv = gf * std::exp(-F_closed(r.w0, r.params.regime));
    r.params.t0 = 0.0;
    return r;
}

// ---------------------------------------------------------------------------
// Closed-form cubic inversion for the generalized van der Pol family
// ---------------------------------------------------------------------------

/// Real root of x^3 - 3x + H = 0. Uses the radical form
/// x = 2^{1/3}/D + D/2^{1/3}, D = (sqrt(H^2-4) - H)^{1/3} inside its validity
/// region H < -2, a bracketed root elsewhere; Newton-polished either way so
/// the residual stays at rounding level.
inline double invert_cubic_vdp(double H) {
    if (std::isnan(H)) throw std::invalid_argument("invert_cubic_vdp: H is NaN");
    double x;
    if (H < -2.0) {
        double D = std::cbrt(std::sqrt(H * H - 4.0) - H);
        x = std::cbrt(2.0) / D + D / std::cbrt(2.0);
    } else {
        double b = 2.0 + std::abs(H);
        x = bracketed_root([H](double t) { return (t * t - 3.0) * t + H; }, -b, b, 1e-13);
    }
    for (int i = 0; i < 3; ++i) {
        double fx = (x * x - 3.0) * x + H;
        double dfx = 3.0 * x * x - 3.0;
        if (dfx == 0.0) break;
        double step = fx / dfx;
        if (!std::isfinite(step)) break;
        x -= step;
    }
    return x;
}

// ---------------------------------------------------------------------------
// solve_parametric
// ---------------------------------------------------------------------------

namespace detail {

// Side grid from `from` to `to` (excluding `from`), denser toward `to` when a
// kernel pole sits close behind it.
inline std::vector<double> side_grid(double from, double to, int n, double k) {
    std::vector<double> out;
    if (n <= 0 || from == to) return out;
    out.reserve(size_t(n));
    double pole_dist = std::numeric_limits<double>::infinity();
    for (double p : kernel_poles(k)) pole_dist = std::min(pole_dist, std::abs(to - p));
    double span = std::abs(to - from);
    bool geometric = pole_dist < 0.25 * span;
    if (!geometric) {
        for (int i = 1; i <= n; ++i)
            out.push_back(from + (to - from) * double(i) / double(n));
        return out;
    }
    // Geometric clustering toward `to`: uniform in log distance-to-end, floor
    // at a fraction of the pole gap.
    double d_lo = std::max(0.05 * pole_dist, 1e-12 * span);
    for (int i = 1; i < n; ++i) {
        double frac = double(i) / double(n); // 0 -> near `from`, 1 -> near `to`
        double d = span * std::pow(d_lo / span, frac);
        out.push_back(to - (to - from) / span * d);
    }
    out.push_back(to);
    return out;
}

struct XSolver {
    const LienardSystem* sys;
    const MultiRootInverter* inverter;
    double domain_lo, domain_hi;

    // Solves g/f = rhs near seed. Returns nullopt when the root vanished
    // (fold) or left the domain.
    std::optional<double> solve(double rhs, double seed, double scale) const {
        if (inverter && *inverter) {
            std::vector<double> roots = (*inverter)(rhs);
            std::optional<double> best;
            for (double r : roots)
                if (!best || std::abs(r - seed) < std::abs(*best - seed)) best = r;
            if (best && (*best < domain_lo || *best > domain_hi)) return std::nullopt;
            return best;
        }
        auto R = [&](double x) { return sys->g(x) / sys->f(x) - rhs; };
        double step = std::max(scale, 1e-9 * std::max(1.0, std::abs(seed)));
        for (int grow = 0; grow < 24; ++grow) {
            auto br = expand_bracket(R, seed, step, 2, domain_lo, domain_hi);
            if (br) {
                if (br->first == br->second) return br->first;
                double x = bracketed_root(R, br->first, br->second, 1e-13);
                return x;
            }
            step *= 4.0;
            if (seed - step < domain_lo && seed + step > domain_hi) break;
        }
        return std::nullopt;
    }
};

} // namespace detail

/// Produces the exact parametric arc through (w0, ic) on the sample grid
/// covering w_range (w0 must lie inside). x(w) comes from the closed-form
/// inverter when given, else from a continuity-tracked bracketed root; t(w) is
/// accumulated segment-by-segment by adaptive quadrature of
/// 1/(f(x(w))(w^2+w+k)); xdot = (g/f)/w. Arcs truncate with a recorded reason
/// where the inversion branch ends.
inline ParametricSolution solve_parametric(const LienardSystem& sys, const ChielliniParams& params,
                                           double w0, const InitialConditions& ic,
                                           std::pair<double, double> w_range, int n_samples = 512,
                                           const MultiRootInverter* inverter = nullptr) {
    if (n_samples < 9) throw std::invalid_argument("solve_parametric: n_samples must be >= 9");
    auto [w_lo, w_hi] = w_range;
    if (!(w_lo <= w0 && w0 <= w_hi))
        throw std::invalid_argument("solve_parametric: w0 must lie inside w_range");
    double where = 0.0;
    auto wdom = WDomain::for_k(params.k, w_lo, w_hi);
    if (wdom.pole_inside(w_lo, w_hi, &where))
        throw PoleError("solve_parametric: kernel pole inside w_range", where);

    const KernelRegime regime = params.regime;
    auto rhs_of = [&](double w) { return params.C_inv * std::exp(F_closed(w, regime)); };

    ParametricSolution sol;
    sol.params = params;
    sol.w_range = w_range;
    sol.w0 = w0;
    sol.x0 = ic.x0;
    sol.xdot0 = ic.xdot0;

    // Anchor sanity: the fitted constants must reproduce (x0, xdot0) at w0.
    double rhs0 = rhs_of(w0);
    double gf0 = sys.g(ic.x0) / sys.f(ic.x0);
    if (std::abs(gf0 - rhs0) > 1e-8 * std::max(1.0, std::abs(rhs0)))
        throw std::invalid_argument("solve_parametric: params do not anchor (x0, xdot0) at w0");

    detail::XSolver xs{&sys, inverter, sys.domain.lo, sys.domain.hi};
    if (inverter && *inverter) {
        std::vector<double> roots = (*inverter)(rhs0);
        if (roots.empty())
            throw std::invalid_argument("solve_parametric: inverter finds no root at the anchor");
        for (size_t i = 0; i < roots.size(); ++i)
            if (std::abs(roots[i] - ic.x0) < std::abs(roots[size_t(sol.branch_id)] - ic.x0))
                sol.branch_id = int(i);
    } else {
        sol.branch_id = -1;
    }

    double quad = w0 * w0 + w0 + params.k;
    sol.time_direction = (sys.f(ic.x0) * quad) > 0.0 ? +1 : -1;

    // Sample counts per side, proportional to length.
    double span = w_hi - w_lo;
    int n_up = span > 0.0 ? int(std::lround((w_hi - w0) / span * (n_samples - 1))) : 0;
    n_up = std::clamp(n_up, (w_hi > w0 ? 4 : 0), n_samples - 1);
    int n_down = n_samples - 1 - n_up;
    if (w0 == w_lo) { n_up += n_down; n_down = 0; }
    if (w0 == w_hi) { n_down += n_up; n_up = 0; }

    auto march = [&](double to, int n, std::vector<ParametricSample>& out) -> ArcTermination {
        out.clear();
        if (n <= 0 || to == w0) return ArcTermination::Completed;
        auto grid = detail::side_grid(w0, to, n, params.k);
        double w_prev = w0, x_prev = ic.x0, t_prev = params.t0;
        double scale_prev = std::abs(ic.x0) * 1e-6 + 1e-9;
        for (double w : grid) {
            double rhs;
            try {
                rhs = rhs_of(w);
            } catch (const PoleError&) {
                return ArcTermination::AccuracyLoss;
            }
            if (!std::isfinite(rhs)) return ArcTermination::AccuracyLoss;
            auto x = xs.solve(rhs, x_prev, scale_prev);
            if (!x) {
                bool closed = inverter && *inverter;
                return closed ? ArcTermination::RadicandNegative : ArcTermination::BracketLost;
            }
            // Defining relation must hold at the accepted sample.
            double gf = sys.g(*x) / sys.f(*x);
            if (std::abs(gf - rhs) > 1e-8 * std::max(1.0, std::abs(rhs)))
                return ArcTermination::AccuracyLoss;
            if (*x < sys.domain.lo || *x > sys.domain.hi) return ArcTermination::DomainEdge;

            double xa = x_prev, xb = *x, wa = w_prev, wb = w;
            auto integrand = [&](double u) {
                double seed = xa + (xb - xa) * (u - wa) / (wb - wa);
                auto xu = xs.solve(rhs_of(u), seed, std::abs(xb - xa) * 0.25 + 1e-12);
                double xv = xu ? *xu : seed;
                return 1.0 / (sys.f(xv) * (u * u + u + params.k));
            };
            double dt;
            try {
                dt = adaptive_quadrature(integrand, w_prev, w, 1e-11);
            } catch (const Error&) {
                return ArcTermination::AccuracyLoss;
            }
            double t = t_prev + dt;
            double xdot = gf / w;
            out.push_back({w, *x, t, xdot});
            scale_prev = std::abs(*x - x_prev) * 0.5 + 1e-12;
            w_prev = w;
            x_prev = *x;
            t_prev = t;
        }
        return ArcTermination::Completed;
    };

    std::vector<ParametricSample> up, down;
    sol.hi_end = march(w_hi, n_up, up);
    sol.lo_end = march(w_lo, n_down, down);

    sol.samples.reserve(up.size() + down.size() + 1);
    for (size_t i = down.size(); i-- > 0;) sol.samples.push_back(down[i]);
    sol.samples.push_back({w0, ic.x0, params.t0, ic.xdot0});
    for (const auto& s : up) sol.samples.push_back(s);

    if (sol.hi_end != ArcTermination::Completed || sol.lo_end != ArcTermination::Completed) {
        sol.notes = "truncated: lo=" + std::string(arc_termination_name(sol.lo_end)) +
                    ", hi=" + std::string(arc_termination_name(sol.hi_end));
    }
    return sol;
}

// ---------------------------------------------------------------------------
// k = 0 branch:  x'' + f(x) x' + A f(x) = 0
// ---------------------------------------------------------------------------

/// Parametric solution in v = 1/xdot of the k=0 family. The implicit relation
/// int f dx = A ln|1/v + A| - 1/v + K1 fixes x(v); K1 comes from the initial
/// conditions; t accumulates the quadrature of 1/(f(x(v)) v (1+Av)). Samples
/// reuse ParametricSample with w holding v.
inline ParametricSolution solve_k_zero(const FunctionSpec& f, double A,
                                       const InitialConditions& ic,
                                       std::pair<double, double> v_range, int n_samples = 512) {
    if (n_samples < 9) throw std::invalid_argument("solve_k_zero: n_samples must be >= 9");
    if (ic.xdot0 == 0.0)
        throw std::invalid_argument("solve_k_zero: xdot0=0 (v=1/xdot does not exist)");
    double v0 = 1.0 / ic.xdot0;
    auto [v_lo, v_hi] = v_range;
    if (!(v_lo <= v0 && v0 <= v_hi))
        throw std::invalid_argument("solve_k_zero: v0=1/xdot0 must lie inside v_range");
    std::vector<double> poles{0.0};
    if (A != 0.0) poles.push_back(-1.0 / A);
    for (double p : poles)
        if (p >= v_lo && p <= v_hi)
            throw PoleError("solve_k_zero: v pole inside v_range", p);

    FunctionSpec intf = f.antiderivative(0.0);
    auto rhs_of = [&](double v) { return A * std::log(std::abs(1.0 / v + A)) - 1.0 / v; };
    double K1 = intf(ic.x0) - rhs_of(v0);

    ParametricSolution sol;
    sol.params.k = 0.0;
    sol.params.C_inv = A; // records the family constant
    sol.params.t0 = 0.0;
    sol.params.regime = KernelRegime::classify(0.0);
    sol.w_range = v_range;
    sol.w0 = v0;
    sol.x0 = ic.x0;
    sol.xdot0 = ic.xdot0;
    sol.branch_id = -1;
    sol.notes = "k=0 branch; parameter column holds v=1/xdot";
    sol.time_direction = (f(ic.x0) * v0 * (1.0 + A * v0)) > 0.0 ? +1 : -1;

    auto solve_x = [&](double target, double seed, double scale) -> std::optional<double> {
        auto R = [&](double x) { return intf(x) - target; };
        double step = std::max(scale, 1e-9 * std::max(1.0, std::abs(seed)));
        for (int grow = 0; grow < 24; ++grow) {
            auto br = expand_bracket(R, seed, step);
            if (br) {
                if (br->first == br->second) return br->first;
                return bracketed_root(R, br->first, br->second, 1e-13);
            }
            step *= 4.0;
        }
        return std::nullopt;
    };

    double span = v_hi - v_lo;
    int n_up = span > 0.0 ? int(std::lround((v_hi - v0) / span * (n_samples - 1))) : 0;
    n_up = std::clamp(n_up, (v_hi > v0 ? 4 : 0), n_samples - 1);
    int n_down = n_samples - 1 - n_up;
    if (v0 == v_lo) { n_up += n_down; n_down = 0; }
    if (v0 == v_hi) { n_down += n_up; n_up = 0; }

    auto march = [&](double to, int n, std::vector<ParametricSample>& out) -> ArcTermination {
        out.clear();
        if (n <= 0 || to == v0) return ArcTermination::Completed;
        // Geometric spacing toward ends close to the v poles.
        std::vector<double> grid;
        {
            double pole_dist = std::numeric_limits<double>::infinity();
            for (double p : poles) pole_dist = std::min(pole_dist, std::abs(to - p));
            double sp = std::abs(to - v0);
            if (pole_dist < 0.25 * sp) {
                double d_lo = std::max(0.05 * pole_dist, 1e-12 * sp);
                for (int i = 1; i < n; ++i)
                    grid.push_back(to - (to - v0) / sp * sp * std::pow(d_lo / sp, double(i) / n));
                grid.push_back(to);
            } else {
                for (int i = 1; i <= n; ++i) grid.push_back(v0 + (to - v0) * double(i) / double(n));
            }
        }
        double v_prev = v0, x_prev = ic.x0, t_prev = 0.0;
        double scale_prev = std::abs(ic.x0) * 1e-6 + 1e-9;
        for (double v : grid) {
            auto x = solve_x(rhs_of(v) + K1, x_prev, scale_prev);
            if (!x) return ArcTermination::BracketLost;
            double va = v_prev, vb = v, xa = x_prev, xb = *x;
            auto integrand = [&](double u) {
                double seed = xa + (xb - xa) * (u - va) / (vb - va);
                auto xu = solve_x(rhs_of(u) + K1, seed, std::abs(xb - xa) * 0.25 + 1e-12);
                double xv = xu ? *xu : seed;
                return 1.0 / (f(xv) * u * (1.0 + A * u));
            };
            double dt;
            try {
                dt = adaptive_quadrature(integrand, v_prev, v, 1e-11);
            } catch (const Error&) {
                return ArcTermination::AccuracyLoss;
            }
            double t = t_prev + dt;
            out.push_back({v, *x, t, 1.0 / v});
            scale_prev = std::abs(*x - x_prev) * 0.5 + 1e-12;
            v_prev = v;
            x_prev = *x;
            t_prev = t;
        }
        return ArcTermination::Completed;
    };

    std::vector<ParametricSample> up, down;
    sol.hi_end = march(v_hi, n_up, up);
    sol.lo_end = march(v_lo, n_down, down);
    sol.samples.reserve(up.size() + down.size() + 1);
    for (size_t i = down.size(); i-- > 0;) sol.samples.push_back(down[i]);
    sol.samples.push_back({v0, ic.x0, 0.0, ic.xdot0});
    for (const auto& s : up) sol.samples.push_back(s);
    return sol;
}

// ---------------------------------------------------------------------------
// Re-parameterization to time
// ---------------------------------------------------------------------------

/// Resamples the arc onto t_grid by monotone-limited cubic Hermite
/// interpolation: x(t) uses the exact slopes xdot carried by the samples,
/// xdot(t) uses shape-preserving estimated slopes. t_grid must lie inside the
/// arc's time window.
inline std::vector<TimeSample> emit_time_series(const ParametricSolution& sol,
                                                const std::vector<double>& t_grid) {
    if (sol.samples.size() < 2)
        throw RangeError("emit_time_series: arc has fewer than 2 samples");
    std::vector<ParametricSample> by_t(sol.samples);
    std::sort(by_t.begin(), by_t.end(),
              [](const ParametricSample& a, const ParametricSample& b) { return a.t < b.t; });
    std::vector<double> t, x, xd;
    t.reserve(by_t.size());
    for (const auto& s : by_t) {
        if (!t.empty() && !(s.t > t.back())) continue; // drop zero-width steps
        t.push_back(s.t);
        x.push_back(s.x);
        xd.push_back(s.xdot);
    }
    if (t.size() < 2) throw RangeError("emit_time_series: degenerate time window");
    CubicHermite xi = CubicHermite::with_slopes(t, x, xd, true);
    CubicHermite di = CubicHermite::pchip(t, xd);
    std::vector<TimeSample> out;
    out.reserve(t_grid.size());
    for (double tq : t_grid) out.push_back({tq, xi(tq), di(tq)});
    return out;
}

} // namespace lienard
