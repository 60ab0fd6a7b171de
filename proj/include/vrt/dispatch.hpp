#pragma once

// Ride-through dispatch: the two source-voltage thresholds that bound what
// reactive power alone can do, dip classification, and the commanded split of
// active power between the grid and the non-grid resource.

#include "vrt/circles.hpp"
#include "vrt/power_flow.hpp"

#include <cmath>
#include <sstream>

namespace vrt {

/// The three source-voltage marks that govern a dip response, all at the
/// parameter set's p_load and rated load voltage.
struct Thresholds {
    PerUnit vs_m = 0.0;       ///< above: reactive power alone suffices
    PerUnit vs_min = 0.0;     ///< below: no P/Q split stays inside s_max
    PerUnit vs_theory = 0.0;  ///< below: infeasible even with unlimited Q
};

enum class DispatchCase {
    QOnly,      ///< reactive support only, grid carries all of p_load
    DualPQ,     ///< non-grid resource must supply Q and part of P
    Infeasible  ///< rated load voltage cannot be held; disconnect implied
};

inline const char* to_string(DispatchCase c) {
    switch (c) {
        case DispatchCase::QOnly: return "QOnly";
        case DispatchCase::DualPQ: return "DualPQ";
        case DispatchCase::Infeasible: return "Infeasible";
    }
    return "?";
}

/// Resolves the freedoms the dispatch rule leaves open.
struct DispatchPolicy {
    /// Position of the commanded Q between the circle's Q-axis crossing
    /// (fraction 0) and its s_max intersection (fraction 1) in the dual-PQ
    /// case. The default reproduces the reference sizing example.
    double q_selection_fraction = 0.4;
    /// Tie margin for threshold classification; ties resolve toward the
    /// less demanding case.
    PerUnit boundary_epsilon = 1e-9;

    void validate() const {
        if (!(q_selection_fraction >= 0.0 && q_selection_fraction <= 1.0)) {
            throw std::domain_error(
                "DispatchPolicy: q_selection_fraction must lie in [0, 1]");
        }
        if (!(boundary_epsilon >= 0.0) || !std::isfinite(boundary_epsilon)) {
            throw std::domain_error(
                "DispatchPolicy: boundary_epsilon must be >= 0");
        }
    }
};

/// Commanded operating point for one dip level. For the infeasible case all
/// power fields stay zero and disconnection is implied.
struct DispatchDecision {
    DispatchCase kind = DispatchCase::Infeasible;
    PerUnit q_total = 0.0;    ///< total reactive power at the load bus, signed
    PerUnit p_grid = 0.0;     ///< active power still drawn from the grid
    PerUnit p_vrt = 0.0;      ///< active power from the non-grid resource
    PerUnit s_grid = 0.0;     ///< apparent power through the substation
    PerUnit s_nongrid = 0.0;  ///< apparent power the non-grid resource carries
    double delta = 0.0;       ///< grid power angle at the commanded point, rad
};

/// Source voltage below which the power circle falls entirely outside the
/// s_max circle: the circle through (0, -s_max), i.e. (vl^2 - x*s_max) / vl.
/// Pure formula; limit cases such as s_max = 0 evaluate fine.
inline PerUnit vs_min_threshold(const SubstationParams& params) {
    detail::require_positive(params.x, "x");
    detail::require_positive(params.v_l, "v_l");
    if (params.s_max < 0.0) {
        throw std::domain_error("vs_min_threshold: s_max must be >= 0");
    }
    return (params.v_l * params.v_l - params.x * params.s_max) / params.v_l;
}

/// Source voltage whose circle passes through the load line's intersection
/// with the s_max circle, (p_load, -sqrt(s_max^2 - p_load^2)): the lowest dip
/// that reactive power alone can cover. For v_l = 1 this reduces to
///   vs_m^2 = 1 + x^2 s_max^2 - 2x sqrt(s_max^2 - p_load^2).
inline PerUnit vs_m_threshold(const SubstationParams& params) {
    if (params.p_load > params.s_max) {
        std::ostringstream os;
        os << "p_load = " << params.p_load << " exceeds s_max = "
           << params.s_max;
        throw InfeasibleLoad(os.str());
    }
    detail::require_positive(params.x, "x");
    detail::require_positive(params.v_l, "v_l");
    const PerUnit vl = params.v_l;
    const PerUnit q_at_limit =
        std::sqrt(params.s_max * params.s_max - params.p_load * params.p_load);
    return params.x / vl * std::hypot(params.p_load, vl * vl / params.x - q_at_limit);
}

inline Thresholds thresholds_of(const SubstationParams& params) {
    return {vs_m_threshold(params), vs_min_threshold(params),
            vs_theoretical_min(params.p_load, params.v_l, params.x)};
}

/// Classifies a dipped source voltage against the two thresholds.
inline DispatchCase classify(PerUnit vs, const SubstationParams& params,
                             const DispatchPolicy& policy = {}) {
    detail::require_positive(vs, "vs");
    params.validate();
    policy.validate();
    const PerUnit eps = policy.boundary_epsilon;
    if (vs >= vs_m_threshold(params) - eps) return DispatchCase::QOnly;
    if (vs <= vs_min_threshold(params) + eps) return DispatchCase::Infeasible;
    return DispatchCase::DualPQ;
}

/// Reactive-only dispatch: the grid keeps carrying all of p_load and the
/// non-grid resource supplies the circle's Q at that power.
inline DispatchDecision dispatch_case1(PerUnit vs,
                                       const SubstationParams& params) {
    params.validate();
    DispatchDecision d;
    d.kind = DispatchCase::QOnly;
    d.q_total = q_on_circle(vs, params.v_l, params.x, params.p_load);
    d.p_grid = params.p_load;
    d.p_vrt = 0.0;
    d.s_grid = apparent_power(d.p_grid, d.q_total);
    d.s_nongrid = std::abs(d.q_total);
    d.delta = solve_delta(d.p_grid, vs, params.v_l, params.x);
    return d;
}

/// Dual-PQ dispatch: picks Q on the arc between the Q-axis crossing and the
/// s_max intersection, then reads the remaining grid power off the circle.
/// The non-grid resource carries all of Q plus the active-power shortfall.
inline DispatchDecision dispatch_case2(PerUnit vs,
                                       const SubstationParams& params,
                                       const DispatchPolicy& policy = {}) {
    params.validate();
    policy.validate();
    const PerUnit vl = params.v_l;
    const PerUnit q_min = q_axis_crossing(vs, vl, params.x);
    const PerUnit q_ints = q_intersection(vs, params);

    DispatchDecision d;
    d.kind = DispatchCase::DualPQ;
    d.q_total = q_min + policy.q_selection_fraction * (q_ints - q_min);

    const PerUnit radius = vs * vl / params.x;
    const PerUnit offset = d.q_total + vl * vl / params.x;
    const double radicand = radius * radius - offset * offset;
    d.p_grid = std::sqrt(std::max(radicand, 0.0));
    if (d.p_grid > params.p_load + boundary_slack) {
        std::ostringstream os;
        os << "dual-PQ dispatch at vs = " << vs << " yields p_grid = "
           << d.p_grid << " > p_load = " << params.p_load
           << "; vs is outside the dual-PQ band";
        throw std::logic_error(os.str());
    }
    // Publish a split that conserves p_load exactly: nudge p_grid by at most
    // one ulp so p_grid + p_vrt reproduces p_load bit for bit.
    d.p_vrt = params.p_load - d.p_grid;
    d.p_grid = params.p_load - d.p_vrt;
    if (d.p_grid + d.p_vrt != params.p_load) {
        d.p_vrt = params.p_load - d.p_grid;
    }
    d.s_grid = apparent_power(d.p_grid, d.q_total);
    d.s_nongrid = apparent_power(d.p_vrt, d.q_total);
    d.delta = solve_delta(d.p_grid, vs, vl, params.x);
    return d;
}

/// Full dip response: classify, then command the matching case. Infeasible
/// dips return a zeroed decision whose kind says to disconnect.
inline DispatchDecision dispatch(PerUnit vs, const SubstationParams& params,
                                 const DispatchPolicy& policy = {}) {
    switch (classify(vs, params, policy)) {
        case DispatchCase::QOnly: return dispatch_case1(vs, params);
        case DispatchCase::DualPQ: return dispatch_case2(vs, params, policy);
        case DispatchCase::Infeasible: break;
    }
    return {};
}

}  // namespace vrt
