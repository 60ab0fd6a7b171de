#pragma once

// PQ-plane geometry at constant load voltage: the family of power circles,
// the apparent-power ceiling circle, their axis crossings and intersections,
// and the apparent-power-versus-source-voltage curve.

#include "vrt/power_flow.hpp"

#include <cmath>
#include <cstddef>
#include <optional>
#include <sstream>
#include <vector>

namespace vrt {

/// The locus of feasible (P, Q) at fixed |Vs|, |Vl|, X is a circle:
///   p^2 + (q + vl^2/x)^2 = (vs*vl/x)^2
/// Its center sits on the Q axis, independent of vs.
struct PowerCircle {
    PerUnit vs = 0.0;
    PerUnit center_q = 0.0;  ///< -vl^2 / x
    PerUnit radius = 0.0;    ///< vs * vl / x
};

/// One power circle sampled over the stable arc delta in [0, pi/2].
struct CircleLocus {
    PerUnit vs = 0.0;
    std::vector<OperatingPoint> points;
};

/// One sample of the apparent-power curve at constant load power.
struct SCurvePoint {
    PerUnit vs = 0.0;
    PerUnit q = 0.0;
    PerUnit s = 0.0;
};

/// Location and value of the apparent-power curve minimum.
struct SCurveMinimum {
    PerUnit vs = 0.0;
    PerUnit s = 0.0;
};

inline PowerCircle circle_of(PerUnit vs, PerUnit vl, PerUnit x) {
    detail::require_positive(vs, "vs");
    detail::require_positive(vl, "vl");
    detail::require_positive(x, "x");
    return {vs, -vl * vl / x, vs * vl / x};
}

/// Samples one circle uniformly in delta over [0, pi/2]. Endpoints are exact:
/// the first point has p = 0 and the last sits at the stability limit.
inline CircleLocus circle_locus(PerUnit vs, PerUnit vl, PerUnit x,
                                std::size_t n_points) {
    if (n_points < 2) {
        throw std::domain_error("circle_locus: n_points must be >= 2");
    }
    CircleLocus locus;
    locus.vs = vs;
    locus.points.reserve(n_points);
    for (std::size_t i = 0; i < n_points; ++i) {
        const double delta =
            half_pi * static_cast<double>(i) / static_cast<double>(n_points - 1);
        locus.points.push_back(operating_point(vs, vl, x, delta));
    }
    return locus;
}

/// One locus per requested source voltage.
inline std::vector<CircleLocus> circle_family(const SubstationParams& params,
                                              const std::vector<PerUnit>& vs_list,
                                              std::size_t n_points) {
    params.validate();
    std::vector<CircleLocus> family;
    family.reserve(vs_list.size());
    for (PerUnit vs : vs_list) {
        family.push_back(circle_locus(vs, params.v_l, params.x, n_points));
    }
    return family;
}

/// The apparent-power ceiling circle, centered at the origin with radius
/// s_max, sampled over the arc from (0, -s_max) through (s_max, 0) to
/// (0, +s_max), i.e. the p >= 0 half.
inline std::vector<PQ> s_max_circle(PerUnit s_max, std::size_t n_points) {
    detail::require_positive(s_max, "s_max");
    if (n_points < 2) {
        throw std::domain_error("s_max_circle: n_points must be >= 2");
    }
    std::vector<PQ> arc;
    arc.reserve(n_points);
    for (std::size_t i = 0; i < n_points; ++i) {
        const double phi = -half_pi + std::numbers::pi * static_cast<double>(i) /
                                          static_cast<double>(n_points - 1);
        arc.push_back({s_max * std::cos(phi), s_max * std::sin(phi)});
    }
    return arc;
}

/// Reactive power where the power circle of vs meets the s_max circle:
///   q_ints = (vs^2 - vl^2 - x^2 s_max^2 / vl^2) / (2x)
/// Pure formula; whether the circles actually intersect is the caller's
/// classification concern.
inline PerUnit q_intersection(PerUnit vs, const SubstationParams& params) {
    detail::require_positive(vs, "vs");
    const PerUnit vl = params.v_l;
    const PerUnit x = params.x;
    return (vs * vs - vl * vl -
            x * x * params.s_max * params.s_max / (vl * vl)) /
           (2.0 * x);
}

/// Reactive power where the power circle crosses the Q axis (delta = 0,
/// p = 0); the smallest |Q| anywhere on the circle:
///   q_min = vl * (vs - vl) / x
inline PerUnit q_axis_crossing(PerUnit vs, PerUnit vl, PerUnit x) {
    detail::require_positive(vs, "vs");
    detail::require_positive(vl, "vl");
    detail::require_positive(x, "x");
    return vl * (vs - vl) / x;
}

/// Theoretical floor on |Vs| below which active power p cannot be delivered
/// at load voltage vl no matter the reactive support: p * x / vl
/// (delta pinned at 90 degrees).
inline PerUnit vs_theoretical_min(PerUnit p, PerUnit vl, PerUnit x) {
    detail::require_positive(vl, "vl");
    detail::require_positive(x, "x");
    if (p < 0.0) throw std::domain_error("vs_theoretical_min: p must be >= 0");
    return p * x / vl;
}

/// Apparent power at the load across a range of source voltages, holding
/// p_load and the rated load voltage. Samples whose circle cannot reach
/// p_load are omitted rather than clamped, so the curve starts at the
/// theoretical voltage floor. Throws EmptyCurve when nothing is feasible.
inline std::vector<SCurvePoint> s_curve(const SubstationParams& params,
                                        PerUnit vs_lo, PerUnit vs_hi,
                                        std::size_t n) {
    params.validate();
    if (!(vs_lo < vs_hi)) {
        throw std::domain_error("s_curve: vs_lo must be < vs_hi");
    }
    if (n < 2) throw std::domain_error("s_curve: n must be >= 2");
    if (!(vs_lo > 0.0)) throw std::domain_error("s_curve: vs_lo must be > 0");

    std::vector<SCurvePoint> curve;
    curve.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const PerUnit vs = vs_lo + (vs_hi - vs_lo) * static_cast<double>(i) /
                                       static_cast<double>(n - 1);
        const auto q = try_q_on_circle(vs, params.v_l, params.x, params.p_load);
        if (!q) continue;
        curve.push_back({vs, *q, apparent_power(params.p_load, *q)});
    }
    if (curve.empty()) {
        std::ostringstream os;
        os << "no feasible samples in [" << vs_lo << ", " << vs_hi
           << "] for p_load = " << params.p_load;
        throw EmptyCurve(os.str());
    }
    return curve;
}

/// The curve minimum sits where Q crosses zero, at
///   vs = sqrt(vl^4 + p_load^2 x^2) / vl,  s = p_load.
inline SCurveMinimum s_curve_minimum(const SubstationParams& params) {
    params.validate();
    const PerUnit vl = params.v_l;
    const PerUnit vs =
        std::sqrt(vl * vl * vl * vl +
                  params.p_load * params.p_load * params.x * params.x) /
        vl;
    return {vs, params.p_load};
}

/// Load voltage that settles across the reactance with zero reactive
/// compensation, from u^2 - vs^2 u + p^2 x^2 = 0 with u = vl^2. Returns the
/// high-voltage (stable-branch) root; nullopt when the discriminant is
/// negative and no operating point exists.
inline std::optional<PerUnit> try_uncompensated_load_voltage(PerUnit vs,
                                                             PerUnit p,
                                                             PerUnit x) {
    detail::require_positive(vs, "vs");
    detail::require_positive(x, "x");
    if (p < 0.0) {
        throw std::domain_error("uncompensated_load_voltage: p must be >= 0");
    }
    const double vs2 = vs * vs;
    double disc = vs2 * vs2 - 4.0 * p * p * x * x;
    if (disc < 0.0) {
        if (disc < -boundary_slack * vs2 * vs2) return std::nullopt;
        disc = 0.0;
    }
    return std::sqrt((vs2 + std::sqrt(disc)) / 2.0);
}

/// Throwing form of try_uncompensated_load_voltage.
inline PerUnit uncompensated_load_voltage(PerUnit vs, PerUnit p, PerUnit x) {
    if (auto vl = try_uncompensated_load_voltage(vs, p, x)) return *vl;
    std::ostringstream os;
    os << "voltage collapse: no uncompensated operating point at vs = " << vs
       << ", p = " << p;
    throw VoltageCollapse(os.str());
}

}  // namespace vrt
