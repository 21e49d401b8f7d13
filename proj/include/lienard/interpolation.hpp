#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "lienard/errors.hpp"

namespace lienard {

/// Piecewise cubic Hermite interpolant on a strictly increasing grid.
///
/// Two constructions: with_slopes takes known derivatives (the solver knows
/// xdot exactly at every sample) and optionally applies the Fritsch-Carlson
/// limiter so the interpolant cannot overshoot on monotone data; pchip
/// estimates shape-preserving slopes from the data alone.
class CubicHermite {
public:
    static CubicHermite with_slopes(std::vector<double> t, std::vector<double> y,
                                    std::vector<double> m, bool monotone_limit = true) {
        CubicHermite h(std::move(t), std::move(y), std::move(m));
        if (monotone_limit) h.apply_limiter();
        return h;
    }

    static CubicHermite pchip(std::vector<double> t, std::vector<double> y) {
        CubicHermite h(std::move(t), std::move(y), {});
        h.m_ = estimate_slopes(h.t_, h.y_);
        return h;
    }

    double t_min() const { return t_.front(); }
    double t_max() const { return t_.back(); }

    double operator()(double t) const {
        size_t i = segment(t);
        double h = t_[i + 1] - t_[i];
        double s = (t - t_[i]) / h;
        double s2 = s * s, s3 = s2 * s;
        return (2.0 * s3 - 3.0 * s2 + 1.0) * y_[i] + (s3 - 2.0 * s2 + s) * h * m_[i] +
               (-2.0 * s3 + 3.0 * s2) * y_[i + 1] + (s3 - s2) * h * m_[i + 1];
    }

    double derivative(double t) const {
        size_t i = segment(t);
        double h = t_[i + 1] - t_[i];
        double s = (t - t_[i]) / h;
        double s2 = s * s;
        return ((6.0 * s2 - 6.0 * s) * y_[i] / h + (3.0 * s2 - 4.0 * s + 1.0) * m_[i] +
                (6.0 * s - 6.0 * s2) * y_[i + 1] / h + (3.0 * s2 - 2.0 * s) * m_[i + 1]);
    }

private:
    CubicHermite(std::vector<double> t, std::vector<double> y, std::vector<double> m)
        : t_(std::move(t)), y_(std::move(y)), m_(std::move(m)) {
        if (t_.size() < 2 || t_.size() != y_.size() || (!m_.empty() && m_.size() != t_.size()))
            throw std::invalid_argument("CubicHermite: need >= 2 samples with matching slopes");
        for (size_t i = 1; i < t_.size(); ++i)
            if (!(t_[i] > t_[i - 1]))
                throw std::invalid_argument("CubicHermite: grid must be strictly increasing");
    }

    size_t segment(double t) const {
        if (t < t_.front() || t > t_.back())
            throw RangeError("CubicHermite: t=" + std::to_string(t) + " outside [" +
                             std::to_string(t_.front()) + ", " + std::to_string(t_.back()) + "]");
        auto it = std::upper_bound(t_.begin(), t_.end(), t);
        size_t i = size_t(it - t_.begin());
        if (i > 0) --i;
        if (i >= t_.size() - 1) i = t_.size() - 2;
        return i;
    }

    // Fritsch-Carlson circle criterion: keeps each segment monotone when its
    // data is. Inactive on well-resolved smooth data.
    void apply_limiter() {
        for (size_t i = 0; i + 1 < t_.size(); ++i) {
            double d = (y_[i + 1] - y_[i]) / (t_[i + 1] - t_[i]);
            if (d == 0.0) {
                m_[i] = 0.0;
                m_[i + 1] = 0.0;
                continue;
            }
            double a = m_[i] / d;
            double b = m_[i + 1] / d;
            if (a < 0.0) { m_[i] = 0.0; a = 0.0; }
            if (b < 0.0) { m_[i + 1] = 0.0; b = 0.0; }
            double s = a * a + b * b;
            if (s > 9.0) {
                double tau = 3.0 / std::sqrt(s);
                m_[i] = tau * a * d;
                m_[i + 1] = tau * b * d;
            }
        }
    }

    static std::vector<double> estimate_slopes(const std::vector<double>& t,
                                               const std::vector<double>& y) {
        size_t n = t.size();
        std::vector<double> m(n, 0.0);
        if (n == 2) {
            m[0] = m[1] = (y[1] - y[0]) / (t[1] - t[0]);
            return m;
        }
        std::vector<double> h(n - 1), d(n - 1);
        for (size_t i = 0; i + 1 < n; ++i) {
            h[i] = t[i + 1] - t[i];
            d[i] = (y[i + 1] - y[i]) / h[i];
        }
        for (size_t i = 1; i + 1 < n; ++i) {
            if (d[i - 1] == 0.0 || d[i] == 0.0 || (d[i - 1] > 0.0) != (d[i] > 0.0)) {
                m[i] = 0.0;
            } else {
                double w1 = 2.0 * h[i] + h[i - 1];
                double w2 = h[i] + 2.0 * h[i - 1];
                m[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
            }
        }
        m[0] = endpoint_slope(h[0], h[1], d[0], d[1]);
        m[n - 1] = endpoint_slope(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
        return m;
    }

    // Moler's shape-preserving one-sided endpoint formula.
    static double endpoint_slope(double h0, double h1, double d0, double d1) {
        double m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (d0 == 0.0 || (m > 0.0) != (d0 > 0.0)) return 0.0;
        if ((d0 > 0.0) != (d1 > 0.0) && std::abs(m) > 3.0 * std::abs(d0)) return 3.0 * d0;
        return m;
    }

    std::vector<double> t_, y_, m_;
};

} // namespace lienard
