#pragma once

// Self-contained SVG figures (inline styling, fixed 800x800 viewport, no
// external assets). Emission is deterministic so outputs can be golden-file
// compared byte for byte.

#include "vrt/circles.hpp"
#include "vrt/csv.hpp"
#include "vrt/dispatch.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

namespace vrt::svg {

inline constexpr double view_size = 800.0;
inline constexpr double margin = 70.0;

struct Bounds {
    double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;
    bool empty = true;

    void include(double x, double y) {
        if (empty) {
            x_min = x_max = x;
            y_min = y_max = y;
            empty = false;
            return;
        }
        x_min = std::min(x_min, x);
        x_max = std::max(x_max, x);
        y_min = std::min(y_min, y);
        y_max = std::max(y_max, y);
    }

    void pad(double frac) {
        const double dx = std::max((x_max - x_min) * frac, 1e-6);
        const double dy = std::max((y_max - y_min) * frac, 1e-6);
        x_min -= dx;
        x_max += dx;
        y_min -= dy;
        y_max += dy;
    }
};

/// World-to-pixel mapping with the SVG y axis flipped. With equal_aspect the
/// same pu-per-pixel scale applies on both axes, so circles render round.
class Mapper {
public:
    Mapper(Bounds b, bool equal_aspect) : b_(b) {
        const double pw = view_size - 2.0 * margin;
        const double ph = view_size - 2.0 * margin;
        double sx = pw / (b_.x_max - b_.x_min);
        double sy = ph / (b_.y_max - b_.y_min);
        if (equal_aspect) sx = sy = std::min(sx, sy);
        sx_ = sx;
        sy_ = sy;
        // Center the used area inside the viewport.
        x0_ = margin + (pw - sx_ * (b_.x_max - b_.x_min)) / 2.0;
        y0_ = margin + (ph - sy_ * (b_.y_max - b_.y_min)) / 2.0;
    }

    double x(double wx) const { return x0_ + (wx - b_.x_min) * sx_; }
    double y(double wy) const { return y0_ + (b_.y_max - wy) * sy_; }
    const Bounds& bounds() const { return b_; }

private:
    Bounds b_;
    double sx_ = 1.0, sy_ = 1.0, x0_ = 0.0, y0_ = 0.0;
};

namespace detail {

inline std::string num(double v) { return format_pu(v); }

/// Tick spacing of 1/2/5 times a power of ten giving about `target` ticks.
inline double nice_step(double range, int target) {
    const double raw = range / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        if (raw <= m * mag) return m * mag;
    }
    return 10.0 * mag;
}

inline void axes(std::ostringstream& out, const Mapper& m,
                 const std::string& x_label, const std::string& y_label) {
    const Bounds& b = m.bounds();
    out << "  <g stroke=\"#c8c8c8\" stroke-width=\"1\" font-size=\"13\" "
           "font-family=\"sans-serif\" fill=\"#333333\">\n";
    const double xs = nice_step(b.x_max - b.x_min, 8);
    for (double t = std::ceil(b.x_min / xs) * xs; t <= b.x_max + 1e-12;
         t += xs) {
        const double px = m.x(t);
        out << "    <line x1=\"" << num(px) << "\" y1=\"" << num(m.y(b.y_min))
            << "\" x2=\"" << num(px) << "\" y2=\"" << num(m.y(b.y_max))
            << "\"/>\n";
        out << "    <text x=\"" << num(px) << "\" y=\""
            << num(m.y(b.y_min) + 20.0)
            << "\" text-anchor=\"middle\" stroke=\"none\">"
            << num(std::abs(t) < xs / 2 ? 0.0 : t) << "</text>\n";
    }
    const double ys = nice_step(b.y_max - b.y_min, 8);
    for (double t = std::ceil(b.y_min / ys) * ys; t <= b.y_max + 1e-12;
         t += ys) {
        const double py = m.y(t);
        out << "    <line x1=\"" << num(m.x(b.x_min)) << "\" y1=\"" << num(py)
            << "\" x2=\"" << num(m.x(b.x_max)) << "\" y2=\"" << num(py)
            << "\"/>\n";
        out << "    <text x=\"" << num(m.x(b.x_min) - 8.0) << "\" y=\""
            << num(py + 4.0) << "\" text-anchor=\"end\" stroke=\"none\">"
            << num(std::abs(t) < ys / 2 ? 0.0 : t) << "</text>\n";
    }
    out << "  </g>\n";
    // Zero axes, when visible.
    out << "  <g stroke=\"#808080\" stroke-width=\"1.5\">\n";
    if (b.y_min < 0.0 && b.y_max > 0.0) {
        out << "    <line x1=\"" << num(m.x(b.x_min)) << "\" y1=\""
            << num(m.y(0.0)) << "\" x2=\"" << num(m.x(b.x_max)) << "\" y2=\""
            << num(m.y(0.0)) << "\"/>\n";
    }
    if (b.x_min < 0.0 && b.x_max > 0.0) {
        out << "    <line x1=\"" << num(m.x(0.0)) << "\" y1=\""
            << num(m.y(b.y_min)) << "\" x2=\"" << num(m.x(0.0)) << "\" y2=\""
            << num(m.y(b.y_max)) << "\"/>\n";
    }
    out << "  </g>\n";
    out << "  <text x=\"" << num(view_size / 2.0) << "\" y=\""
        << num(view_size - 12.0)
        << "\" text-anchor=\"middle\" font-size=\"15\" "
           "font-family=\"sans-serif\">"
        << x_label << "</text>\n";
    out << "  <text x=\"18\" y=\"" << num(view_size / 2.0)
        << "\" text-anchor=\"middle\" font-size=\"15\" "
           "font-family=\"sans-serif\" transform=\"rotate(-90 18 "
        << num(view_size / 2.0) << ")\">" << y_label << "</text>\n";
}

template <typename Pts, typename GetX, typename GetY>
inline void polyline(std::ostringstream& out, const Mapper& m, const Pts& pts,
                     GetX gx, GetY gy, const std::string& style) {
    out << "  <polyline fill=\"none\" " << style << " points=\"";
    bool first = true;
    for (const auto& p : pts) {
        if (!first) out << ' ';
        first = false;
        out << num(m.x(gx(p))) << ',' << num(m.y(gy(p)));
    }
    out << "\"/>\n";
}

inline void header(std::ostringstream& out, const std::string& title) {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" "
           "height=\"800\" viewBox=\"0 0 800 800\">\n";
    out << "  <rect width=\"800\" height=\"800\" fill=\"#ffffff\"/>\n";
    out << "  <text x=\"" << num(view_size / 2.0)
        << "\" y=\"34\" text-anchor=\"middle\" font-size=\"17\" "
           "font-family=\"sans-serif\">"
        << title << "</text>\n";
}

}  // namespace detail

/// Power-circle family on the PQ plane with the apparent-power ceiling, the
/// delta = 90 deg boundary, and the vertical load line.
inline std::string circles_figure(const std::vector<CircleLocus>& family,
                                  const std::vector<PQ>& s_arc,
                                  const SubstationParams& params) {
    Bounds b;
    for (const auto& locus : family) {
        for (const auto& pt : locus.points) b.include(pt.p, pt.q);
    }
    for (const auto& pt : s_arc) b.include(pt.p, pt.q);
    b.include(params.p_load, 0.0);
    b.pad(0.06);
    const Mapper m(b, true);

    std::ostringstream out;
    detail::header(out, "Load-side power circles at constant load voltage");
    detail::axes(out, m, "P (pu)", "Q (pu)");

    const double boundary_q = -params.v_l * params.v_l / params.x;
    if (boundary_q > b.y_min && boundary_q < b.y_max) {
        out << "  <line stroke=\"#999999\" stroke-width=\"1\" "
               "stroke-dasharray=\"6,4\" x1=\""
            << detail::num(m.x(b.x_min)) << "\" y1=\""
            << detail::num(m.y(boundary_q)) << "\" x2=\""
            << detail::num(m.x(b.x_max)) << "\" y2=\""
            << detail::num(m.y(boundary_q)) << "\"/>\n";
        out << "  <text x=\"" << detail::num(m.x(b.x_max) - 4.0) << "\" y=\""
            << detail::num(m.y(boundary_q) - 6.0)
            << "\" text-anchor=\"end\" font-size=\"13\" "
               "font-family=\"sans-serif\" fill=\"#666666\">delta = 90 "
               "deg</text>\n";
    }

    out << "  <line stroke=\"#2e7d32\" stroke-width=\"1.5\" "
           "stroke-dasharray=\"8,4\" x1=\""
        << detail::num(m.x(params.p_load)) << "\" y1=\""
        << detail::num(m.y(b.y_min)) << "\" x2=\""
        << detail::num(m.x(params.p_load)) << "\" y2=\""
        << detail::num(m.y(b.y_max)) << "\"/>\n";
    out << "  <text x=\"" << detail::num(m.x(params.p_load) + 6.0)
        << "\" y=\"" << detail::num(m.y(b.y_max) + 16.0)
        << "\" font-size=\"13\" font-family=\"sans-serif\" "
           "fill=\"#2e7d32\">P_load = "
        << detail::num(params.p_load) << "</text>\n";

    for (const auto& locus : family) {
        detail::polyline(
            out, m, locus.points, [](const OperatingPoint& p) { return p.p; },
            [](const OperatingPoint& p) { return p.q; },
            "stroke=\"#4878a8\" stroke-width=\"1.2\"");
        if (!locus.points.empty()) {
            const auto& end = locus.points.back();
            out << "  <text x=\"" << detail::num(m.x(end.p))
                << "\" y=\"" << detail::num(m.y(end.q) + 16.0)
                << "\" text-anchor=\"middle\" font-size=\"11\" "
                   "font-family=\"sans-serif\" fill=\"#4878a8\">"
                << detail::num(locus.vs) << "</text>\n";
        }
    }

    detail::polyline(
        out, m, s_arc, [](const PQ& p) { return p.p; },
        [](const PQ& p) { return p.q; },
        "stroke=\"#c23b22\" stroke-width=\"2\"");
    if (!s_arc.empty()) {
        out << "  <text x=\"" << detail::num(m.x(s_arc.back().p) + 6.0)
            << "\" y=\"" << detail::num(m.y(s_arc.back().q))
            << "\" font-size=\"13\" font-family=\"sans-serif\" "
               "fill=\"#c23b22\">S_max = "
            << detail::num(params.s_max) << "</text>\n";
    }

    out << "</svg>\n";
    return out.str();
}

/// Apparent power at the load versus source voltage, with the theoretical
/// cutoff and the curve minimum marked.
inline std::string s_curve_figure(const std::vector<SCurvePoint>& curve,
                                  const SubstationParams& params) {
    Bounds b;
    for (const auto& pt : curve) b.include(pt.vs, pt.s);
    const PerUnit cutoff =
        vs_theoretical_min(params.p_load, params.v_l, params.x);
    b.include(cutoff, 0.0);
    b.pad(0.06);
    const Mapper m(b, false);

    std::ostringstream out;
    detail::header(out, "Apparent power at the load versus source voltage");
    detail::axes(out, m, "|Vs| (pu)", "S (pu)");

    out << "  <line stroke=\"#c23b22\" stroke-width=\"1.5\" "
           "stroke-dasharray=\"6,4\" x1=\""
        << detail::num(m.x(cutoff)) << "\" y1=\"" << detail::num(m.y(b.y_min))
        << "\" x2=\"" << detail::num(m.x(cutoff)) << "\" y2=\""
        << detail::num(m.y(b.y_max)) << "\"/>\n";
    out << "  <text x=\"" << detail::num(m.x(cutoff) + 6.0) << "\" y=\""
        << detail::num(m.y(b.y_max) + 16.0)
        << "\" font-size=\"13\" font-family=\"sans-serif\" "
           "fill=\"#c23b22\">cutoff = "
        << detail::num(cutoff) << "</text>\n";

    detail::polyline(
        out, m, curve, [](const SCurvePoint& p) { return p.vs; },
        [](const SCurvePoint& p) { return p.s; },
        "stroke=\"#4878a8\" stroke-width=\"2\"");

    const SCurveMinimum mn = s_curve_minimum(params);
    out << "  <circle cx=\"" << detail::num(m.x(mn.vs)) << "\" cy=\""
        << detail::num(m.y(mn.s))
        << "\" r=\"4\" fill=\"#2e7d32\"/>\n";
    out << "  <text x=\"" << detail::num(m.x(mn.vs)) << "\" y=\""
        << detail::num(m.y(mn.s) - 10.0)
        << "\" text-anchor=\"middle\" font-size=\"13\" "
           "font-family=\"sans-serif\" fill=\"#2e7d32\">min S = "
        << detail::num(mn.s) << " at |Vs| = " << detail::num(mn.vs)
        << "</text>\n";

    out << "</svg>\n";
    return out.str();
}

}  // namespace vrt::svg
