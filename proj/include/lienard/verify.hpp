#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "lienard/errors.hpp"
#include "lienard/integrability.hpp"
#include "lienard/kernel.hpp"
#include "lienard/roots.hpp"
#include "lienard/solver.hpp"
#include "lienard/trajectory.hpp"

namespace lienard {

// ---------------------------------------------------------------------------
// Reference integration: Dormand-Prince 5(4), adaptive, with the classic
// order-4 continuous extension. Entirely independent of the parametric
// pipeline: it sees only f, g and the first-order system x' = u,
// u' = -f(x) u - g(x).
// ---------------------------------------------------------------------------

struct ReferenceTrajectory {
    struct DenseStep {
        double t0, h;
        std::array<double, 2> r1, r2, r3, r4, r5;
    };

    std::vector<double> t_nodes;
    std::vector<std::array<double, 2>> y_nodes; // (x, xdot)
    std::vector<DenseStep> steps;               // ascending by segment start
    double tol = 0.0;
    int order = 5;
    long steps_accepted = 0;
    long steps_rejected = 0;
    long evaluations = 0;

    double t_min() const { return std::min(t_nodes.front(), t_nodes.back()); }
    double t_max() const { return std::max(t_nodes.front(), t_nodes.back()); }

    std::array<double, 2> at(double t) const {
        if (t < t_min() || t > t_max())
            throw RangeError("ReferenceTrajectory::at: t outside the integrated span");
        // steps sorted by min(t0, t0+h)
        size_t lo = 0, hi = steps.size();
        while (hi - lo > 1) {
            size_t mid = (lo + hi) / 2;
            double start = std::min(steps[mid].t0, steps[mid].t0 + steps[mid].h);
            if (start <= t) lo = mid; else hi = mid;
        }
        const DenseStep& s = steps[lo];
        double th = (t - s.t0) / s.h;
        double th1 = 1.0 - th;
        std::array<double, 2> y;
        for (int i = 0; i < 2; ++i)
            y[size_t(i)] = s.r1[size_t(i)] +
                           th * (s.r2[size_t(i)] +
                                 th1 * (s.r3[size_t(i)] +
                                        th * (s.r4[size_t(i)] + th1 * s.r5[size_t(i)])));
        return y;
    }
    double x_at(double t) const { return at(t)[0]; }
    double xdot_at(double t) const { return at(t)[1]; }
};

/// Integrates x'' + f(x) x' + g(x) = 0 over t_span (backward when
/// t_span.second < t_span.first) with local error <= tol per step component
/// (absolute and relative). Throws IntegrationError with the last accepted
/// state on step underflow or step-cap.
inline ReferenceTrajectory integrate_reference(const LienardSystem& sys,
                                               const InitialConditions& ic,
                                               std::pair<double, double> t_span,
                                               double tol = 1e-10) {
    if (!(tol >= 1e-13 && tol <= 1e-3))
        throw std::invalid_argument("integrate_reference: tol must be in [1e-13, 1e-3]");
    const double t0 = t_span.first, t1 = t_span.second;
    ReferenceTrajectory out;
    out.tol = tol;
    if (t0 == t1) {
        out.t_nodes = {t0};
        out.y_nodes = {{ic.x0, ic.xdot0}};
        return out;
    }

    using Y = std::array<double, 2>;
    auto rhs = [&](double, const Y& y) -> Y { return {y[1], -sys.f(y[0]) * y[1] - sys.g(y[0])}; };

    // Dormand-Prince coefficients.
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                     a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                     a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                     a75 = -2187.0 / 6784, a76 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                     e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
    constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                     d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                     d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

    const double dir = t1 > t0 ? 1.0 : -1.0;
    double t = t0;
    Y y{ic.x0, ic.xdot0};
    Y k1 = rhs(t, y);
    out.evaluations = 1;
    auto finite = [](const Y& v) { return std::isfinite(v[0]) && std::isfinite(v[1]); };
    if (!finite(k1)) throw IntegrationError("integrate_reference: non-finite RHS at start",
                                            t, y[0], y[1]);

    // Initial step: crude curvature probe.
    double h;
    {
        double sc0 = tol + tol * std::max(std::abs(y[0]), std::abs(y[1]));
        double d0 = std::max(std::abs(y[0]), std::abs(y[1])) / sc0;
        double dd1 = std::max(std::abs(k1[0]), std::abs(k1[1])) / sc0;
        double h0 = (d0 < 1e-5 || dd1 < 1e-5) ? 1e-6 : 0.01 * d0 / dd1;
        h0 = std::min(h0, std::abs(t1 - t0));
        Y ye{y[0] + dir * h0 * k1[0], y[1] + dir * h0 * k1[1]};
        Y k2 = rhs(t + dir * h0, ye);
        out.evaluations++;
        double dd2 = std::max(std::abs(k2[0] - k1[0]), std::abs(k2[1] - k1[1])) / sc0 / h0;
        double dmax = std::max(dd1, dd2);
        double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3)
                                  : std::pow(0.01 / dmax, 1.0 / 5.0);
        h = dir * std::min({100.0 * h0, h1, std::abs(t1 - t0)});
    }

    out.t_nodes.push_back(t);
    out.y_nodes.push_back(y);

    const long max_steps = 4000000;
    for (long step = 0;; ++step) {
        if (step >= max_steps)
            throw IntegrationError("integrate_reference: step cap reached", t, y[0], y[1]);
        if ((t - t1) * dir >= 0.0) break;
        if (std::abs(h) < 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t)))
            throw IntegrationError("integrate_reference: step-size underflow", t, y[0], y[1]);
        if ((t + h - t1) * dir > 0.0) h = t1 - t;

        Y k2v, k3v, k4v, k5v, k6v, k7v, ynew, yt;
        auto stage = [&](double cc, std::initializer_list<std::pair<double, const Y*>> terms) {
            yt = y;
            for (auto [aa, kk] : terms) {
                yt[0] += h * aa * (*kk)[0];
                yt[1] += h * aa * (*kk)[1];
            }
            return rhs(t + cc * h, yt);
        };
        k2v = stage(c2, {{a21, &k1}});
        k3v = stage(c3, {{a31, &k1}, {a32, &k2v}});
        k4v = stage(c4, {{a41, &k1}, {a42, &k2v}, {a43, &k3v}});
        k5v = stage(c5, {{a51, &k1}, {a52, &k2v}, {a53, &k3v}, {a54, &k4v}});
        k6v = stage(1.0, {{a61, &k1}, {a62, &k2v}, {a63, &k3v}, {a64, &k4v}, {a65, &k5v}});
        for (int i = 0; i < 2; ++i)
            ynew[size_t(i)] = y[size_t(i)] + h * (a71 * k1[size_t(i)] + a73 * k3v[size_t(i)] +
                                                  a74 * k4v[size_t(i)] + a75 * k5v[size_t(i)] +
                                                  a76 * k6v[size_t(i)]);
        k7v = rhs(t + h, ynew);
        out.evaluations += 6;
        if (!finite(k7v) || !finite(ynew))
            throw IntegrationError("integrate_reference: solution blew up", t, y[0], y[1]);

        double err = 0.0;
        for (int i = 0; i < 2; ++i) {
            double e = h * (e1 * k1[size_t(i)] + e3 * k3v[size_t(i)] + e4 * k4v[size_t(i)] +
                            e5 * k5v[size_t(i)] + e6 * k6v[size_t(i)] + e7 * k7v[size_t(i)]);
            double sc = tol + tol * std::max(std::abs(y[size_t(i)]), std::abs(ynew[size_t(i)]));
            err += (e / sc) * (e / sc);
        }
        err = std::sqrt(0.5 * err);

        if (err <= 1.0) {
            ReferenceTrajectory::DenseStep ds;
            ds.t0 = t;
            ds.h = h;
            for (int i = 0; i < 2; ++i) {
                size_t j = size_t(i);
                double ydiff = ynew[j] - y[j];
                double bspl = h * k1[j] - ydiff;
                ds.r1[j] = y[j];
                ds.r2[j] = ydiff;
                ds.r3[j] = bspl;
                ds.r4[j] = ydiff - h * k7v[j] - bspl;
                ds.r5[j] = h * (d1 * k1[j] + d3 * k3v[j] + d4 * k4v[j] + d5 * k5v[j] +
                                d6 * k6v[j] + d7 * k7v[j]);
            }
            out.steps.push_back(ds);
            t += h;
            y = ynew;
            k1 = k7v; // FSAL
            out.t_nodes.push_back(t);
            out.y_nodes.push_back(y);
            out.steps_accepted++;
            double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
            h *= std::clamp(fac, 0.2, 5.0);
        } else {
            out.steps_rejected++;
            double fac = 0.9 * std::pow(err, -0.2);
            h *= std::clamp(fac, 0.1, 0.9);
        }
    }

    if (dir < 0.0) {
        std::reverse(out.t_nodes.begin(), out.t_nodes.end());
        std::reverse(out.y_nodes.begin(), out.y_nodes.end());
        std::reverse(out.steps.begin(), out.steps.end());
    }
    return out;
}

// ---------------------------------------------------------------------------
// Comparison reports
// ---------------------------------------------------------------------------

struct ComparisonReport {
    struct Row {
        double t, x_sol, xdot_sol, x_ref, xdot_ref;
    };
    double max_abs_x_error = 0.0;
    double max_abs_xdot_error = 0.0;
    double t_lo = 0.0, t_hi = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::vector<Row> rows;

    std::string summary() const {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%s max|dx|=%.3e max|dxdot|=%.3e on [%g, %g]",
                      pass ? "PASS" : "FAIL", max_abs_x_error, max_abs_xdot_error, t_lo, t_hi);
        return buf;
    }
};

namespace detail {

template <class EmitFn>
ComparisonReport compare_impl(EmitFn&& emit, double sol_lo, double sol_hi,
                              const ReferenceTrajectory& ref, double tol, int n_grid) {
    ComparisonReport rep;
    rep.tolerance = tol;
    rep.t_lo = std::max(sol_lo, ref.t_min());
    rep.t_hi = std::min(sol_hi, ref.t_max());
    if (!(rep.t_lo < rep.t_hi))
        throw RangeError("compare: solution and reference time windows are disjoint");
    std::vector<double> grid(size_t(std::max(n_grid, 2)));
    for (size_t i = 0; i < grid.size(); ++i)
        grid[i] = rep.t_lo + (rep.t_hi - rep.t_lo) * double(i) / double(grid.size() - 1);
    grid.front() = rep.t_lo;
    grid.back() = rep.t_hi;
    auto sol = emit(grid);
    rep.rows.reserve(grid.size());
    for (size_t i = 0; i < grid.size(); ++i) {
        auto yr = ref.at(grid[i]);
        ComparisonReport::Row row{grid[i], sol[i].x, sol[i].xdot, yr[0], yr[1]};
        rep.rows.push_back(row);
        rep.max_abs_x_error = std::max(rep.max_abs_x_error, std::abs(row.x_sol - row.x_ref));
        rep.max_abs_xdot_error =
            std::max(rep.max_abs_xdot_error, std::abs(row.xdot_sol - row.xdot_ref));
    }
    rep.pass = rep.max_abs_x_error <= tol;
    return rep;
}

} // namespace detail

/// Interpolates both solutions onto a common grid inside the overlapping
/// window; pass iff max |x_sol - x_ref| <= tol.
inline ComparisonReport compare(const ParametricSolution& sol, const ReferenceTrajectory& ref,
                                double tol = 1e-6, int n_grid = 1001) {
    double lo = sol.t_min(), hi = sol.t_max();
    return detail::compare_impl(
        [&](const std::vector<double>& grid) { return emit_time_series(sol, grid); }, lo, hi, ref,
        tol, n_grid);
}

inline ComparisonReport compare(const Trajectory& traj, const ReferenceTrajectory& ref,
                                double tol = 1e-6, int n_grid = 1001) {
    return detail::compare_impl(
        [&](const std::vector<double>& grid) { return traj.emit(grid); }, traj.t_min(),
        traj.t_max(), ref, tol, n_grid);
}

// ---------------------------------------------------------------------------
// Abel-equation residuals
// ---------------------------------------------------------------------------

namespace detail {

/// Three-point first derivative on a possibly non-uniform grid (second order).
inline double d3point(double ym, double y0, double yp, double hm, double hp) {
    return (yp * hm * hm - ym * hp * hp + y0 * (hp * hp - hm * hm)) /
           (hm * hp * (hm + hp));
}

} // namespace detail

/// Max grid residual of v' = f v^2 + g v^3 for the constructed solution
/// v(x) = w(x)/(g/f)(x), with w(x) inverted from the defining relation on the
/// component of w_seed. Second-order accurate in the grid spacing.
inline double abel_residual(const LienardSystem& sys, const ChielliniParams& params,
                            const std::vector<double>& x_grid, double w_seed) {
    if (x_grid.size() < 3) throw std::invalid_argument("abel_residual: need >= 3 grid points");
    WComponent comp = component_of(w_seed, params.k);
    std::vector<double> v(x_grid.size());
    double seed = w_seed;
    for (size_t i = 0; i < x_grid.size(); ++i) {
        double gf = sys.g(x_grid[i]) / sys.f(x_grid[i]);
        double r = gf / params.C_inv;
        if (!(r > 0.0))
            throw DomainError("abel_residual: defining relation has no solution at x", x_grid[i]);
        double w = invert_F(std::log(r), params.k, comp, seed);
        seed = w;
        v[i] = w / gf; // v = C e^{-F} w
    }
    double worst = 0.0;
    for (size_t i = 1; i + 1 < x_grid.size(); ++i) {
        double hm = x_grid[i] - x_grid[i - 1];
        double hp = x_grid[i + 1] - x_grid[i];
        double dv = detail::d3point(v[i - 1], v[i], v[i + 1], hm, hp);
        double vv = v[i];
        double rhs = sys.f(x_grid[i]) * vv * vv + sys.g(x_grid[i]) * vv * vv * vv;
        worst = std::max(worst, std::abs(dv - rhs));
    }
    return worst;
}

/// Same residual for the k=0 family: v(x) solves
/// int f = A ln|1/v + A| - 1/v + K1 and must satisfy v' = f v^2 (1 + A v).
inline double abel_residual_k_zero(const FunctionSpec& f, double A, double K1,
                                   const std::vector<double>& x_grid, double v_seed) {
    if (x_grid.size() < 3)
        throw std::invalid_argument("abel_residual_k_zero: need >= 3 grid points");
    FunctionSpec intf = f.antiderivative(0.0);
    std::vector<double> v(x_grid.size());
    double seed = v_seed;
    for (size_t i = 0; i < x_grid.size(); ++i) {
        double target = intf(x_grid[i]);
        auto R = [&](double vv) {
            return A * std::log(std::abs(1.0 / vv + A)) - 1.0 / vv + K1 - target;
        };
        auto br = expand_bracket(R, seed, std::abs(seed) * 0.25 + 1e-9);
        if (!br) throw BracketError("abel_residual_k_zero: lost the v(x) bracket");
        double vv = br->first == br->second ? br->first
                                            : bracketed_root(R, br->first, br->second, 1e-14);
        v[i] = vv;
        seed = vv;
    }
    double worst = 0.0;
    for (size_t i = 1; i + 1 < x_grid.size(); ++i) {
        double hm = x_grid[i] - x_grid[i - 1];
        double hp = x_grid[i + 1] - x_grid[i];
        double dv = detail::d3point(v[i - 1], v[i], v[i + 1], hm, hp);
        double vv = v[i];
        double rhs = f(x_grid[i]) * vv * vv * (1.0 + A * vv);
        worst = std::max(worst, std::abs(dv - rhs));
    }
    return worst;
}

} // namespace lienard
