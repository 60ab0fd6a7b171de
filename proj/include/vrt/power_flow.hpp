#pragma once

// Per-unit receiving-end power flow across a single series reactance.
//
// Conventions used throughout the library:
//   - All magnitudes are per unit on the substation MVA/kV base.
//   - Angles are radians internally; degrees appear only at CLI boundaries.
//   - Capacitive (leading) reactive power is negative.
//   - All quantities are load-side (receiving end).

#include "vrt/errors.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

namespace vrt {

/// Dimensionless per-unit quantity. Voltage magnitudes and apparent powers
/// are non-negative; P and Q may carry either sign.
using PerUnit = double;

inline constexpr double half_pi = std::numbers::pi / 2.0;

/// Relative slack applied when clamping radicands and arcsine arguments that
/// sit on a feasibility boundary up to floating-point rounding.
inline constexpr double boundary_slack = 1e-12;

/// Substation seen from the load: grid behind a series reactance, a constant
/// active-power load, and a short-term apparent-power ceiling.
struct SubstationParams {
    PerUnit x = 0.2;       ///< equivalent series reactance
    PerUnit s_max = 1.3;   ///< maximum short-term apparent power
    PerUnit v_l = 1.0;     ///< rated (target) load voltage
    PerUnit p_load = 0.9;  ///< constant load active power

    /// Throws std::domain_error on any violated constraint. Note the
    /// structural requirement x * s_max < v_l * v_l: without it the pure-Q
    /// feasibility floor would sit at or below zero source voltage.
    void validate() const {
        auto fail = [](const std::string& what) {
            throw std::domain_error("SubstationParams: " + what);
        };
        if (!(std::isfinite(x) && std::isfinite(s_max) && std::isfinite(v_l) &&
              std::isfinite(p_load))) {
            fail("all fields must be finite");
        }
        if (!(x > 0.0)) fail("x must be > 0");
        if (!(s_max > 0.0)) fail("s_max must be > 0");
        if (!(v_l > 0.0)) fail("v_l must be > 0");
        if (p_load < 0.0) fail("p_load must be >= 0");
        if (p_load > s_max) fail("p_load must not exceed s_max");
        if (!(x * s_max < v_l * v_l)) fail("x * s_max must be < v_l^2");
    }
};

/// A load-side (P, Q) pair.
struct PQ {
    PerUnit p = 0.0;
    PerUnit q = 0.0;
};

/// A fully resolved load-side operating point.
struct OperatingPoint {
    PerUnit p = 0.0;
    PerUnit q = 0.0;
    double delta = 0.0;  ///< source-load angle, radians, in [0, pi/2]
    PerUnit s = 0.0;     ///< apparent power, sqrt(p^2 + q^2)
};

namespace detail {

inline void require_positive(PerUnit v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        std::ostringstream os;
        os << name << " must be positive and finite, got " << v;
        throw std::domain_error(os.str());
    }
}

inline void require_angle(double delta) {
    if (!(delta >= 0.0 && delta <= half_pi)) {
        std::ostringstream os;
        os << "delta must lie in [0, pi/2], got " << delta;
        throw std::domain_error(os.str());
    }
}

}  // namespace detail

/// Receiving-end active and reactive power at angle delta:
///   p = vs * vl * sin(delta) / x
///   q = vl * (vs * cos(delta) - vl) / x
inline PQ receiving_end_pq(PerUnit vs, PerUnit vl, PerUnit x, double delta) {
    detail::require_positive(vs, "vs");
    detail::require_positive(vl, "vl");
    detail::require_positive(x, "x");
    detail::require_angle(delta);
    return {vs * vl * std::sin(delta) / x,
            vl * (vs * std::cos(delta) - vl) / x};
}

/// Angle delivering active power p at the given voltages, on the stable
/// branch: arcsin(p * x / (vs * vl)) in [0, pi/2]. Throws InfeasiblePower
/// when p * x exceeds vs * vl beyond rounding slack.
inline double solve_delta(PerUnit p, PerUnit vs, PerUnit vl, PerUnit x) {
    detail::require_positive(vs, "vs");
    detail::require_positive(vl, "vl");
    detail::require_positive(x, "x");
    if (p < 0.0) throw std::domain_error("solve_delta: p must be >= 0");
    double arg = p * x / (vs * vl);
    if (arg > 1.0) {
        if (arg > 1.0 + boundary_slack) {
            std::ostringstream os;
            os << "no stable angle: p*x = " << p * x << " exceeds vs*vl = "
               << vs * vl;
            throw InfeasiblePower(os.str());
        }
        arg = 1.0;
    }
    return std::asin(arg);
}

/// Apparent power sqrt(p^2 + q^2).
inline PerUnit apparent_power(PerUnit p, PerUnit q) noexcept {
    return std::hypot(p, q);
}

/// Reactive power on the delta in [0, pi/2] branch of the constant-voltage
/// circle at active power p, or nullopt when that circle does not reach p:
///   q = -vl^2/x + sqrt((vs*vl/x)^2 - p^2)
inline std::optional<PerUnit> try_q_on_circle(PerUnit vs, PerUnit vl, PerUnit x,
                                              PerUnit p) {
    detail::require_positive(vs, "vs");
    detail::require_positive(vl, "vl");
    detail::require_positive(x, "x");
    const double radius = vs * vl / x;
    double radicand = radius * radius - p * p;
    if (radicand < 0.0) {
        if (radicand < -boundary_slack * radius * radius) return std::nullopt;
        radicand = 0.0;
    }
    return -vl * vl / x + std::sqrt(radicand);
}

/// Throwing form of try_q_on_circle.
inline PerUnit q_on_circle(PerUnit vs, PerUnit vl, PerUnit x, PerUnit p) {
    if (auto q = try_q_on_circle(vs, vl, x, p)) return *q;
    std::ostringstream os;
    os << "power circle for vs = " << vs << " does not reach p = " << p;
    throw InfeasiblePower(os.str());
}

/// Full operating point at angle delta.
inline OperatingPoint operating_point(PerUnit vs, PerUnit vl, PerUnit x,
                                      double delta) {
    const PQ pq = receiving_end_pq(vs, vl, x, delta);
    return {pq.p, pq.q, delta, apparent_power(pq.p, pq.q)};
}

}  // namespace vrt
