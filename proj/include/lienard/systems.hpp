#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "lienard/integrability.hpp"
#include "lienard/roots.hpp"
#include "lienard/solver.hpp"

namespace lienard {

/// A ready-to-solve family: the system, its Chiellini constant k, and the
/// closed-form inversion of g/f = rhs where one exists.
struct BuiltinSystem {
    std::string name;
    LienardSystem sys;
    double k = 0.0;
    MultiRootInverter invert; // empty -> bracketed inversion
};

/// f = ax+b, g = (a^2 k/2) x^3 + (3abk/2) x^2 + (aC1 + b^2 k) x + b C1.
/// g/f = C1 + kb x + (ka/2) x^2; inversion is the quadratic formula.
inline BuiltinSystem make_eq48(double a, double b, double k, double C1) {
    BuiltinSystem s;
    s.name = "eq48";
    s.k = k;
    Polynomial f = Polynomial::linear(Rational::from_double(b), Rational::from_double(a));
    s.sys.f = FunctionSpec(f);
    s.sys.g = FunctionSpec(construct_g_from_f(f, Rational::from_double(k), Rational::from_double(C1)));
    s.invert = [a, b, k, C1](double rhs) {
        std::vector<double> roots;
        if (a == 0.0) {
            if (b * k != 0.0) roots.push_back((rhs - C1) / (b * k));
            return roots;
        }
        double disc = b * b * k * k - 2.0 * a * k * (C1 - rhs);
        if (disc < 0.0) return roots;
        double sq = std::sqrt(disc);
        roots.push_back((-b * k - sq) / (a * k));
        roots.push_back((-b * k + sq) / (a * k));
        return roots;
    };
    return s;
}

/// g = cx+d, f = sign * (cx+d)/sqrt(ck x^2 + 2dk x + C2).
/// (g/f)^2 = ck x^2 + 2dk x + C2; inversion is again quadratic.
inline BuiltinSystem make_eq53(double c, double d, double k, double C2, int sign = +1) {
    BuiltinSystem s;
    s.name = "eq53";
    s.k = k;
    Polynomial g = Polynomial::linear(Rational::from_double(d), Rational::from_double(c));
    s.sys.g = FunctionSpec(g);
    s.sys.f = construct_f_from_g(s.sys.g, k, C2, sign);
    double sg = double(sign);
    s.invert = [c, d, k, C2, sg](double rhs) {
        std::vector<double> roots;
        // g/f = sign*sqrt(...): rhs must carry the branch sign.
        if (rhs * sg < 0.0) return roots;
        double target = rhs * rhs; // = ck x^2 + 2dk x + C2
        if (c * k == 0.0) {
            if (d * k != 0.0) roots.push_back((target - C2) / (2.0 * d * k));
            return roots;
        }
        double disc = d * d * k * k - c * k * (C2 - target);
        if (disc < 0.0) return roots;
        double sq = std::sqrt(disc);
        roots.push_back((-d * k - sq) / (c * k));
        roots.push_back((-d * k + sq) / (c * k));
        return roots;
    };
    return s;
}

/// Generalized van der Pol: f = -mu(1-x^2),
/// g = (k mu^2/3) x^5 - (4 k mu^2/3) x^3 + C1 mu x^2 + k mu^2 x - C1 mu.
/// g/f = C1 - k mu x + (k mu/3) x^3; inversion via the cubic x^3 - 3x + H.
inline BuiltinSystem make_gvdp(double mu, double k, double C1) {
    BuiltinSystem s;
    s.name = "gvdp";
    s.k = k;
    Rational rmu = Rational::from_double(mu);
    Polynomial f({-rmu, Rational(0), rmu}); // -mu + mu x^2
    s.sys.f = FunctionSpec(f);
    s.sys.g = FunctionSpec(construct_g_from_f(f, Rational::from_double(k), Rational::from_double(C1)));
    s.invert = [mu, k, C1](double rhs) {
        // C1 - k mu x + (k mu/3) x^3 = rhs  <=>  x^3 - 3x + H = 0,
        // H = 3(C1 - rhs)/(k mu).
        double H = 3.0 * (C1 - rhs) / (k * mu);
        return cubic_real_roots(0.0, -3.0, H);
    };
    return s;
}

} // namespace lienard
