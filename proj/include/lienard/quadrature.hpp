#pragma once

#include <array>
#include <cmath>
#include <string>
#include <utility>

#include "lienard/errors.hpp"

namespace lienard {

namespace detail {

// Gauss-Kronrod 7-15 pair (QUADPACK dqk15 abscissae/weights). The embedded
// 7-point Gauss value supplies the error estimate for the 15-point result.
inline constexpr std::array<double, 8> kGK15Nodes = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kGK15WeightsK = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

inline constexpr std::array<double, 4> kGK15WeightsG = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <class F>
std::pair<double, double> gk15(F&& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fc = f(c);
    double kron = kGK15WeightsK[7] * fc;
    double gauss = kGK15WeightsG[3] * fc;
    for (int i = 0; i < 7; ++i) {
        double fl = f(c - h * kGK15Nodes[size_t(i)]);
        double fr = f(c + h * kGK15Nodes[size_t(i)]);
        kron += kGK15WeightsK[size_t(i)] * (fl + fr);
        if (i % 2 == 1) gauss += kGK15WeightsG[size_t(i / 2)] * (fl + fr);
    }
    double value = kron * h;
    double err = std::abs((kron - gauss) * h);
    if (!std::isfinite(value))
        throw DomainError("adaptive_quadrature: non-finite integrand near x=" + std::to_string(c), c);
    return {value, err};
}

struct QuadFailure {
    bool failed = false;
    double worst_err = 0.0;
};

// Bisection adaptivity, depth cap 40 (2^40 intervals equivalent). On cap the
// best panel estimate is kept and the failure recorded for the caller.
template <class F>
double adapt(F& f, double a, double b, double tol, int depth, QuadFailure& fail) {
    auto [value, err] = gk15(f, a, b);
    if (err <= tol || b - a <= 1e-300) return value;
    if (depth >= 40) {
        fail.failed = true;
        fail.worst_err = std::max(fail.worst_err, err);
        return value;
    }
    double m = 0.5 * (a + b);
    return adapt(f, a, m, 0.5 * tol, depth + 1, fail) +
           adapt(f, m, b, 0.5 * tol, depth + 1, fail);
}

} // namespace detail

/// Integrates f over [a, b] (a > b flips the sign) to absolute tolerance tol.
/// Throws AccuracyError carrying the best estimate when the subdivision cap
/// is hit, DomainError on non-finite integrand values.
template <class F>
double adaptive_quadrature(F&& f, double a, double b, double tol = 1e-11) {
    if (a == b) return 0.0;
    double sign = 1.0;
    if (a > b) { std::swap(a, b); sign = -1.0; }
    detail::QuadFailure fail;
    double v = detail::adapt(f, a, b, tol, 0, fail);
    if (fail.failed)
        throw AccuracyError("adaptive_quadrature: tolerance not reached (subdivision cap)",
                            sign * v, fail.worst_err);
    return sign * v;
}

} // namespace lienard
