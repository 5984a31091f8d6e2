#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "pcurve/analysis.hpp"
#include "pcurve/arc_curve.hpp"
#include "pcurve/cylinder.hpp"

namespace pcurve {

/// Two-panel SVG: the planar curve over x in [-pi, 3pi] with crossings and the
/// witness loop, and the cylinder strip [0, 2pi) x v with the projected curve.
/// Each reported crossing gets exactly one element of class "crossing".
inline std::string render_svg(const ArcCurve& curve, const AnalysisReport& report) {
    constexpr double kWidth = 900.0, kPanel = 320.0, kMargin = 30.0;
    const double pi = std::numbers::pi;
    auto samples = curve.samples();
    double vmin = samples[0].v, vmax = samples[0].v;
    for (const auto& s : samples) {
        vmin = std::min(vmin, s.v);
        vmax = std::max(vmax, s.v);
    }
    const double vpad = 0.1 * std::max(1e-3, vmax - vmin) + 0.2;
    vmin -= vpad;
    vmax += vpad;

    std::ostringstream out;
    out.precision(6);
    out << std::fixed;
    const double height = 2.0 * kPanel + 3.0 * kMargin;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << kWidth << ' ' << height << "\">\n"
        << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << height << "\" fill=\"white\"/>\n";

    // panel 1: plane, x in [-pi, 3pi]
    const double x0 = -pi, x1 = 3.0 * pi;
    const double top1 = kMargin;
    const double w = kWidth - 2.0 * kMargin;
    auto px = [&](double x) { return kMargin + (x - x0) / (x1 - x0) * w; };
    auto py1 = [&](double v) { return top1 + (vmax - v) / (vmax - vmin) * kPanel; };
    out << "<g id=\"plane\">\n<text x=\"" << kMargin << "\" y=\"" << top1 - 8.0
        << "\" font-size=\"14\">plane: " << report.label << ", ell=" << report.ell << "</text>\n"
        << "<rect x=\"" << kMargin << "\" y=\"" << top1 << "\" width=\"" << w << "\" height=\"" << kPanel
        << "\" fill=\"none\" stroke=\"#999\"/>\n";
    const double ell = curve.ell();
    auto plane_path = [&](double a, double b, const char* stroke, double stroke_width) {
        const int steps = std::max(2, static_cast<int>(std::ceil((b - a) / curve.spacing())));
        out << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"" << stroke_width
            << "\" points=\"";
        for (int i = 0; i <= steps; ++i) {
            const Vec2 p = curve.point(a + (b - a) * i / steps);
            out << px(p.x) << ',' << py1(p.y) << ' ';
        }
        out << "\"/>\n";
    };
    // enough periods to cover the window
    plane_path(-2.0 * ell, 3.0 * ell, "#1f4e9c", 1.5);
    if (report.short_loop) plane_path(report.short_loop->a, report.short_loop->b, "#d62728", 3.0);
    for (const Crossing& c : report.crossings) {
        Vec2 p = curve.point(c.s2);
        p.x -= kTwoPi * std::floor((p.x - x0) / kTwoPi);  // first translate inside the window
        out << "<circle class=\"crossing\" cx=\"" << px(p.x) << "\" cy=\"" << py1(p.y)
            << "\" r=\"4\" fill=\"none\" stroke=\"#2ca02c\" stroke-width=\"2\"/>\n";
    }
    out << "</g>\n";

    // panel 2: cylinder strip
    const double top2 = 2.0 * kMargin + kPanel;
    auto cx = [&](double phi) { return kMargin + phi / kTwoPi * w; };
    auto py2 = [&](double v) { return top2 + (vmax - v) / (vmax - vmin) * kPanel; };
    out << "<g id=\"cylinder\">\n<text x=\"" << kMargin << "\" y=\"" << top2 - 8.0
        << "\" font-size=\"14\">cylinder strip [0, 2pi) x v, turning " << report.turning_multiple
        << " x 2pi</text>\n"
        << "<rect x=\"" << kMargin << "\" y=\"" << top2 << "\" width=\"" << w << "\" height=\"" << kPanel
        << "\" fill=\"none\" stroke=\"#999\"/>\n";
    {
        const std::size_t n = samples.size();
        out << "<path fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.2\" d=\"";
        bool pen_down = false;
        double prev_phi = 0.0;
        for (std::size_t j = 0; j <= n; ++j) {
            const auto& smp = samples[j % n];
            const double phi = reduce_phi(smp.u);
            if (!pen_down || std::abs(phi - prev_phi) > pi) out << 'M';
            else out << 'L';
            out << cx(phi) << ',' << py2(smp.v) << ' ';
            pen_down = true;
            prev_phi = phi;
        }
        out << "\"/>\n";
    }
    for (const Crossing& c : report.crossings) {
        out << "<text class=\"winding\" x=\"" << cx(c.point.phi) + 5.0 << "\" y=\"" << py2(c.point.v) - 5.0
            << "\" font-size=\"11\" fill=\"#2ca02c\">k=" << c.winding << "</text>\n";
    }
    out << "</g>\n</svg>\n";
    return out.str();
}

} // namespace pcurve
