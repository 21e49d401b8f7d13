#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "lienard/csv.hpp"
#include "lienard/errors.hpp"

namespace lienard {

struct SvgCurve {
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#1f6fb2";
};

/// Static SVG 1.1 line plot: axes, a handful of ticks, one polyline per
/// curve. Written atomically like the CSV output.
inline void write_svg_plot(const std::string& path, const std::vector<SvgCurve>& curves,
                           const std::string& x_label, const std::string& y_label,
                           const std::string& title = "") {
    const double W = 800, H = 500, ml = 70, mr = 20, mt = title.empty() ? 20 : 40, mb = 50;
    double x_lo = 1e300, x_hi = -1e300, y_lo = 1e300, y_hi = -1e300;
    for (const auto& c : curves)
        for (size_t i = 0; i < c.x.size(); ++i) {
            if (!std::isfinite(c.x[i]) || !std::isfinite(c.y[i])) continue;
            x_lo = std::min(x_lo, c.x[i]);
            x_hi = std::max(x_hi, c.x[i]);
            y_lo = std::min(y_lo, c.y[i]);
            y_hi = std::max(y_hi, c.y[i]);
        }
    if (!(x_lo <= x_hi) || !(y_lo <= y_hi)) throw Error("write_svg_plot: no finite data");
    if (x_lo == x_hi) { x_lo -= 1; x_hi += 1; }
    if (y_lo == y_hi) { y_lo -= 1; y_hi += 1; }
    double padx = 0.03 * (x_hi - x_lo), pady = 0.05 * (y_hi - y_lo);
    x_lo -= padx; x_hi += padx; y_lo -= pady; y_hi += pady;
    auto X = [&](double v) { return ml + (v - x_lo) / (x_hi - x_lo) * (W - ml - mr); };
    auto Y = [&](double v) { return H - mb - (v - y_lo) / (y_hi - y_lo) * (H - mt - mb); };

    std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::trunc);
        if (!os) throw Error("write_svg_plot: cannot open " + tmp);
        os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
           << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << W
           << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << " " << H << "\">\n"
           << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
        if (!title.empty())
            os << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" "
               << "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";
        // axes
        os << "<g stroke=\"#333\" stroke-width=\"1\">\n"
           << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << W - mr << "\" y2=\""
           << H - mb << "\"/>\n"
           << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << H - mb
           << "\"/>\n</g>\n";
        os << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
        const int nticks = 6;
        for (int i = 0; i <= nticks; ++i) {
            double vx = x_lo + (x_hi - x_lo) * i / nticks;
            double vy = y_lo + (y_hi - y_lo) * i / nticks;
            char bx[32], by[32];
            std::snprintf(bx, sizeof bx, "%.4g", vx);
            std::snprintf(by, sizeof by, "%.4g", vy);
            os << "<line stroke=\"#333\" x1=\"" << X(vx) << "\" y1=\"" << H - mb << "\" x2=\""
               << X(vx) << "\" y2=\"" << H - mb + 5 << "\"/>\n"
               << "<text x=\"" << X(vx) << "\" y=\"" << H - mb + 18
               << "\" text-anchor=\"middle\">" << bx << "</text>\n"
               << "<line stroke=\"#333\" x1=\"" << ml - 5 << "\" y1=\"" << Y(vy) << "\" x2=\""
               << ml << "\" y2=\"" << Y(vy) << "\"/>\n"
               << "<text x=\"" << ml - 8 << "\" y=\"" << Y(vy) + 4
               << "\" text-anchor=\"end\">" << by << "</text>\n";
        }
        os << "<text x=\"" << (ml + W - mr) / 2 << "\" y=\"" << H - 12
           << "\" text-anchor=\"middle\">" << x_label << "</text>\n"
           << "<text x=\"16\" y=\"" << (mt + H - mb) / 2 << "\" text-anchor=\"middle\" "
           << "transform=\"rotate(-90 16 " << (mt + H - mb) / 2 << ")\">" << y_label
           << "</text>\n</g>\n";
        for (const auto& c : curves) {
            os << "<polyline fill=\"none\" stroke=\"" << c.color
               << "\" stroke-width=\"1.5\" points=\"";
            for (size_t i = 0; i < c.x.size(); ++i) {
                if (!std::isfinite(c.x[i]) || !std::isfinite(c.y[i])) continue;
                char pt[64];
                std::snprintf(pt, sizeof pt, "%.2f,%.2f ", X(c.x[i]), Y(c.y[i]));
                os << pt;
            }
            os << "\"/>\n";
        }
        os << "</svg>\n";
        if (!os) throw Error("write_svg_plot: write failed");
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw Error("write_svg_plot: rename failed for " + path);
}

} // namespace lienard
