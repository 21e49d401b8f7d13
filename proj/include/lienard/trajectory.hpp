#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "lienard/errors.hpp"
#include "lienard/integrability.hpp"
#include "lienard/interpolation.hpp"
#include "lienard/kernel.hpp"
#include "lienard/quadrature.hpp"
#include "lienard/roots.hpp"
#include "lienard/solver.hpp"

namespace lienard {

// A single parametric sweep ends wherever its w-chart degenerates. This layer
// glues sweeps so that any forward time window can be covered:
//
//   turning   xdot = 0  <->  |w| -> inf, F -> F_inf finite. Time stays
//             regular in s = 1/w (dt = -ds/(f(x)(1+s+ks^2))); the solution
//             re-enters on the opposite infinite component with the arc
//             constant refitted from C^{-1} = (g/f)(x*) e^{-F_inf'}.
//   crossing  g/f -> 0 with xdot != 0  <->  w -> 0. 1/xdot has a finite limit
//             there, so time stays regular in x; C^{-1} flips sign exactly.
//   fold      f = 0  <->  dw/dt reverses. Regular in the x-chart; the march
//             passes straight through.
//
// Between events the march integrates t over x:  t += integral dx / xdot(x),
// xdot(x) = (g/f)(x) / w(x), with w(x) the F-inverse of ln((g/f)(x)/C^{-1})
// on the current component.

struct TrajectoryEvent {
    enum class Kind { Start, Turning, GfZeroCrossing, DomainEdge, Stalled, End };
    Kind kind;
    double t;
    double x;
};

inline const char* trajectory_event_name(TrajectoryEvent::Kind k) {
    switch (k) {
        case TrajectoryEvent::Kind::Start: return "start";
        case TrajectoryEvent::Kind::Turning: return "turning";
        case TrajectoryEvent::Kind::GfZeroCrossing: return "gf-zero";
        case TrajectoryEvent::Kind::DomainEdge: return "domain-edge";
        case TrajectoryEvent::Kind::Stalled: return "stalled";
        default: return "end";
    }
}

/// Glued exact solution x(t), xdot(t) on [0, t_end]: samples at roughly
/// uniform time spacing plus the glue events (turnings carry xdot = 0
/// exactly).
struct Trajectory {
    std::vector<TimeSample> samples; // strictly increasing t from 0
    std::vector<TrajectoryEvent> events;
    double k = 0.0;
    bool complete = false;
    std::string notes;

    double t_min() const { return samples.front().t; }
    double t_max() const { return samples.back().t; }

    /// Monotone-limited cubic Hermite resampling; x(t) uses the exact xdot
    /// slopes, xdot(t) uses shape-preserving estimated slopes.
    std::vector<TimeSample> emit(const std::vector<double>& t_grid) const {
        std::vector<double> t, x, xd;
        t.reserve(samples.size());
        for (const auto& s : samples) {
            if (!t.empty() && !(s.t > t.back())) continue;
            t.push_back(s.t);
            x.push_back(s.x);
            xd.push_back(s.xdot);
        }
        if (t.size() < 2) throw RangeError("Trajectory::emit: fewer than 2 samples");
        CubicHermite xi = CubicHermite::with_slopes(t, x, xd, true);
        CubicHermite di = CubicHermite::pchip(t, xd);
        std::vector<TimeSample> out;
        out.reserve(t_grid.size());
        for (double tq : t_grid) out.push_back({tq, xi(tq), di(tq)});
        return out;
    }
};

namespace detail {

struct TrajMarch {
    const LienardSystem* sys;
    double k;
    KernelRegime regime;
    double dt_target;
    size_t max_samples;
    Trajectory* out;

    // Arc state.
    double t, x, w, C_inv;
    WComponent comp;
    int dir; // sign of xdot

    double gf(double xx) const { return sys->g(xx) / sys->f(xx); }

    bool push(double tt, double xx, double xd) {
        out->samples.push_back({tt, xx, xd});
        return out->samples.size() < max_samples;
    }

    double w_of(double xx, double seed) const {
        double r = gf(xx) / C_inv;
        if (!(r > 0.0)) throw BracketError("trajectory: relation target left the arc");
        return invert_F(std::log(r), k, comp, seed);
    }

    /// t across [xa, xb] in the x-chart: integral of w(x)/(g/f)(x).
    double dt_between(double xa, double xb, double wa, double wb) const {
        if (xa == xb) return 0.0;
        auto integrand = [&](double u) {
            double seed = wa + (wb - wa) * (u - xa) / (xb - xa);
            double wu = w_of(u, seed);
            return wu / gf(u);
        };
        return adaptive_quadrature(integrand, xa, xb, 1e-11);
    }

    /// x on the arc at parameter s = 1/w (s = 0 is the turning itself),
    /// bracketed inside [x_lo, x_hi].
    double x_at_s(double s, double x_lo, double x_hi, int side) const {
        double Fv = (s == 0.0) ? F_limit_infinity(k, side) : F_closed(1.0 / s, regime);
        double target = C_inv * std::exp(Fv);
        auto R = [&](double xx) { return gf(xx) - target; };
        return bracketed_root(R, x_lo, x_hi, 1e-14);
    }

    /// t across [sa, sb] of the s-chart: integral of -1/(f(x(s))(1+s+ks^2)).
    double dt_s_chart(double sa, double sb, double x_lo, double x_hi, int side) const {
        if (sa == sb) return 0.0;
        auto integrand = [&](double s) {
            double xx = x_at_s(s, x_lo, x_hi, side);
            return -1.0 / (sys->f(xx) * (1.0 + s + k * s * s));
        };
        return adaptive_quadrature(integrand, sa, sb, 1e-11);
    }
};

} // namespace detail

/// Continues the exact parametric solution through turnings, g/f zero
/// crossings and folds until t_end (forward time, t0 = 0). Invalid starts
/// (xdot0 = 0, f(x0) = 0, k = 0) throw; leaving the domain or stalling
/// truncates with a recorded event.
inline Trajectory solve_trajectory(const LienardSystem& sys, double k,
                                   const InitialConditions& ic, double t_end,
                                   int n_samples = 2048) {
    if (!(t_end > 0.0)) throw std::invalid_argument("solve_trajectory: t_end must be > 0");
    if (n_samples < 16) throw std::invalid_argument("solve_trajectory: n_samples must be >= 16");
    FitResult fit = fit_initial_conditions(sys, k, ic);

    Trajectory traj;
    traj.k = k;
    traj.events.push_back({TrajectoryEvent::Kind::Start, 0.0, ic.x0});

    detail::TrajMarch m;
    m.sys = &sys;
    m.k = k;
    m.regime = fit.params.regime;
    m.dt_target = t_end / double(n_samples);
    m.max_samples = size_t(n_samples) * 64 + 8192;
    m.out = &traj;
    m.t = 0.0;
    m.x = ic.x0;
    m.w = fit.w0;
    m.C_inv = fit.params.C_inv;
    m.comp = component_of(fit.w0, k);
    m.dir = ic.xdot0 > 0.0 ? +1 : -1;
    m.push(0.0, ic.x0, ic.xdot0);

    const auto poles = kernel_poles(k);
    const double w_big = 1e3;
    int halvings = 0;
    bool suppress_turning = false;

    auto truncate = [&](TrajectoryEvent::Kind kind, const std::string& why) {
        traj.events.push_back({kind, m.t, m.x});
        traj.complete = false;
        traj.notes = why;
        return traj;
    };

    // Crosses the turning at x_star: approach s -> 0, land with xdot = 0,
    // re-enter on the opposite infinite component. Returns false when the
    // re-entry bracket cannot be established.
    auto run_turning = [&](double x_star) -> int {
        int side = m.w > 0.0 ? +1 : -1;
        double x_lo = std::min(m.x, x_star), x_hi = std::max(m.x, x_star);
        const double s0 = 1.0 / m.w;
        double s_prev = s0;
        const int nsub = 10;
        for (int i = 1; i <= nsub; ++i) {
            double s = s0 * double(nsub - i) / double(nsub);
            m.t += m.dt_s_chart(s_prev, s, x_lo, x_hi, side);
            double xx = (i == nsub) ? x_star : m.x_at_s(s, x_lo, x_hi, side);
            double xd_s = (i == nsub) ? 0.0 : m.gf(xx) * s;
            if (!m.push(m.t, xx, xd_s)) return -1;
            s_prev = s;
        }
        traj.events.push_back({TrajectoryEvent::Kind::Turning, m.t, x_star});

        int side2 = -side;
        m.dir = -m.dir;
        m.C_inv = m.gf(x_star) / std::exp(F_limit_infinity(k, side2));
        double big = 1e300;
        m.comp = component_of(double(side2) * big, k);

        double s_back = double(side2) / w_big;
        double span0 = 1e-6 * (1.0 + std::abs(x_star));
        auto rho2 = [&](double xx) {
            double r = m.gf(xx) / m.C_inv;
            return r <= 0.0 ? -1.0 : std::log(r) - F_closed(1.0 / s_back, m.regime);
        };
        auto brk2 = expand_bracket(rho2, x_star, span0, 80,
                                   m.dir > 0 ? x_star : sys.domain.lo,
                                   m.dir > 0 ? sys.domain.hi : x_star);
        if (!brk2) return 0;
        double x_back = brk2->first == brk2->second
                            ? brk2->first
                            : bracketed_root(rho2, brk2->first, brk2->second, 1e-15);
        double xb_lo = std::min(x_star, x_back), xb_hi = std::max(x_star, x_back);
        s_prev = 0.0;
        for (int i = 1; i <= nsub; ++i) {
            double s = s_back * double(i) / double(nsub);
            m.t += m.dt_s_chart(s_prev, s, xb_lo, xb_hi, side2);
            double xx = (i == nsub) ? x_back : m.x_at_s(s, xb_lo, xb_hi, side2);
            if (!m.push(m.t, xx, m.gf(xx) * s)) return -1;
            s_prev = s;
        }
        m.x = x_back;
        m.w = 1.0 / s_back;
        return 1;
    };

    while (m.t < t_end) {
        if (traj.samples.size() + 32 >= m.max_samples)
            return truncate(TrajectoryEvent::Kind::Stalled, "sample cap reached");
        if (halvings > 60)
            return truncate(TrajectoryEvent::Kind::Stalled, "step kept failing");

        // Per-arc data: w-flow direction and the component end it heads to.
        double quad = m.w * m.w + m.w + k;
        int flow = (sys.f(m.x) * quad) > 0.0 ? +1 : -1;
        double w_target_end = flow > 0 ? m.comp.hi : m.comp.lo;
        bool turning_possible = std::isinf(w_target_end);
        double F_sup = turning_possible ? F_limit_infinity(k, w_target_end > 0 ? +1 : -1) : 0.0;
        bool crossing_possible = w_target_end == 0.0;
        double dF_switch =
            turning_possible
                ? std::abs(F_closed(std::copysign(w_big, w_target_end), m.regime) - F_sup)
                : 0.0;

        double xd = m.gf(m.x) / m.w;
        double dx_cap = 0.25 * (1.0 + std::abs(m.x));
        double dx = double(m.dir) * std::min(std::abs(xd) * m.dt_target, dx_cap);
        if (dx == 0.0)
            return truncate(TrajectoryEvent::Kind::Stalled, "xdot underflow (equilibrium)");
        double x_next = m.x + dx;

        if (x_next < sys.domain.lo || x_next > sys.domain.hi) {
            double x_edge = sys.domain.clamp(x_next);
            try {
                double w_edge = m.w_of(x_edge, m.w);
                m.t += m.dt_between(m.x, x_edge, m.w, w_edge);
                m.push(m.t, x_edge, m.gf(x_edge) / w_edge);
                m.x = x_edge;
            } catch (const Error&) {
            }
            return truncate(TrajectoryEvent::Kind::DomainEdge, "left the system domain");
        }

        double r_next = m.gf(x_next) / m.C_inv;

        if (!(r_next > 0.0)) {
            if (crossing_possible) {
                // g/f zero: integrate up to it, flip C, continue on the other
                // w-sign component.
                double x_z = bracketed_root([&](double xx) { return m.gf(xx); },
                                            std::min(m.x, x_next), std::max(m.x, x_next), 1e-15);
                double c0 = F_log_offset_at_zero(k);
                int w_side = m.w > 0.0 ? +1 : -1;
                m.t += m.dt_between(m.x, x_z, m.w, std::copysign(1e-290, m.w));
                double xd_z = double(w_side) * m.C_inv * std::exp(c0);
                if (!m.push(m.t, x_z, xd_z))
                    return truncate(TrajectoryEvent::Kind::Stalled, "sample cap reached");
                traj.events.push_back({TrajectoryEvent::Kind::GfZeroCrossing, m.t, x_z});

                m.C_inv = -m.C_inv;
                double gap = 1.0;
                for (double p : poles)
                    if (p != 0.0 && (p > 0.0) == (w_side < 0)) gap = std::min(gap, std::abs(p));
                m.comp = component_of(-double(w_side) * 0.5 * gap, k);
                double x_past = x_z + double(m.dir) *
                                          std::max(std::abs(dx) * 0.25, 1e-12 * (1.0 + std::abs(x_z)));
                double w_seed = -double(w_side) * 1e-290;
                double w_past = m.w_of(x_past, w_seed);
                m.t += m.dt_between(x_z, x_past, w_seed, w_past);
                m.x = x_past;
                m.w = w_past;
                if (!m.push(m.t, m.x, m.gf(m.x) / m.w))
                    return truncate(TrajectoryEvent::Kind::Stalled, "sample cap reached");
                halvings = 0;
                continue;
            }
            // Overshot an asymptotic arc end; retry smaller.
            ++halvings;
            m.dt_target *= 0.5;
            continue;
        }

        double gap_to_limit = turning_possible
                                  ? std::abs(F_sup - std::log(r_next))
                                  : std::numeric_limits<double>::infinity();
        if (suppress_turning && gap_to_limit > 4.0 * dF_switch) suppress_turning = false;
        bool near_turning = turning_possible && !suppress_turning &&
                            (gap_to_limit < dF_switch || std::abs(m.w) > w_big);

        if (!near_turning) {
            try {
                double w_next = m.w_of(x_next, m.w);
                m.t += m.dt_between(m.x, x_next, m.w, w_next);
                m.x = x_next;
                m.w = w_next;
                if (!m.push(m.t, m.x, m.gf(m.x) / m.w))
                    return truncate(TrajectoryEvent::Kind::Stalled, "sample cap reached");
                halvings = 0;
                continue;
            } catch (const Error&) {
                if (!turning_possible || suppress_turning) {
                    ++halvings;
                    m.dt_target *= 0.5;
                    continue;
                }
                // fall through: the step overran a turning
            }
        }

        // Locate the turning point r(x*) = e^{F_sup} ahead of x.
        double r_lim = std::exp(F_sup);
        auto rho = [&](double xx) { return m.gf(xx) / m.C_inv - r_lim; };
        auto brk = expand_bracket(rho, m.x, std::max(std::abs(dx), 1e-9), 80,
                                  m.dir > 0 ? m.x : sys.domain.lo,
                                  m.dir > 0 ? sys.domain.hi : m.x);
        if (!brk) {
            // Near-limit fold, not an actual turning: suppress the guard.
            suppress_turning = true;
            ++halvings;
            continue;
        }
        double x_star = brk->first == brk->second
                            ? brk->first
                            : bracketed_root(rho, brk->first, brk->second, 1e-15);
        int rc = run_turning(x_star);
        if (rc < 0) return truncate(TrajectoryEvent::Kind::Stalled, "sample cap reached");
        if (rc == 0) return truncate(TrajectoryEvent::Kind::Stalled, "turning re-entry failed");
        halvings = 0;
    }

    traj.events.push_back({TrajectoryEvent::Kind::End, m.t, m.x});
    traj.complete = true;
    return traj;
}

} // namespace lienard
