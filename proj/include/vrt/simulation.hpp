#pragma once

// Deterministic discrete-time replay of a source-voltage trace through the
// dispatch engine and an idealized UPS. Zero-order hold between samples;
// timers accumulate the intervals between consecutive samples, so irregular
// traces are fine. Collapse and infeasibility are modeled outcomes here, not
// faults.

#include "vrt/circles.hpp"
#include "vrt/dispatch.hpp"
#include "vrt/power_flow.hpp"

#include <cmath>
#include <cstddef>
#include <sstream>
#include <vector>

namespace vrt {

struct TraceSample {
    double t = 0.0;  ///< seconds
    PerUnit vs = 0.0;
};

/// A recorded (or synthesized) source-voltage dip trace.
struct DipTrace {
    std::vector<TraceSample> samples;

    void validate() const {
        if (samples.empty()) {
            throw std::domain_error("DipTrace: at least one sample required");
        }
        for (std::size_t i = 0; i < samples.size(); ++i) {
            const auto& s = samples[i];
            if (!std::isfinite(s.t) || !std::isfinite(s.vs) || s.vs < 0.0) {
                std::ostringstream os;
                os << "DipTrace: bad sample at index " << i;
                throw std::domain_error(os.str());
            }
            if (i > 0 && !(s.t > samples[i - 1].t)) {
                std::ostringstream os;
                os << "DipTrace: time must be strictly increasing at index "
                   << i;
                throw std::domain_error(os.str());
            }
        }
    }
};

/// UPS voltage window and transfer timing. Defaults model a +/-15% input
/// window, a 20 ms transfer decision, and the traditional double-digit-second
/// wait before returning to the grid source.
struct UpsConfig {
    PerUnit v_low = 0.85;
    PerUnit v_high = 1.15;
    double transfer_delay = 0.02;      ///< seconds outside the window before transfer
    PerUnit reconnect_threshold = 0.9; ///< source voltage counted as recovered
    double reconnect_delay = 10.0;     ///< seconds of continuous recovery required

    void validate() const {
        if (!(v_low < reconnect_threshold && reconnect_threshold <= v_high)) {
            throw std::domain_error(
                "UpsConfig: require v_low < reconnect_threshold <= v_high");
        }
        if (!(v_low > 0.0)) throw std::domain_error("UpsConfig: v_low must be > 0");
        if (!(transfer_delay >= 0.0) || !(reconnect_delay >= 0.0)) {
            throw std::domain_error("UpsConfig: delays must be >= 0");
        }
    }
};

enum class SimMode { OnGrid, Emergency, ReconnectWait };

/// Timers accumulate floating-point sample intervals; comparisons against
/// the configured delays allow one nanosecond of accumulated rounding.
inline constexpr double timer_slack = 1e-9;

inline const char* to_string(SimMode m) {
    switch (m) {
        case SimMode::OnGrid: return "OnGrid";
        case SimMode::Emergency: return "Emergency";
        case SimMode::ReconnectWait: return "ReconnectWait";
    }
    return "?";
}

/// Simulator state between samples. window_timer measures how long the
/// currently pending condition (window violation or recovery) has persisted;
/// it resets exactly when that condition clears.
struct SimState {
    SimMode mode = SimMode::OnGrid;
    double window_timer = 0.0;
    bool compensation_active = false;
    // Bookkeeping for zero-order-hold timing.
    bool window_violated = false;
    bool has_time = false;
    double last_time = 0.0;
};

/// Per-step supply label: the dispatch classification when compensation is
/// commanded, or NoCompNeeded when the replay runs without compensation.
enum class StepCase { QOnly, DualPQ, Infeasible, NoCompNeeded };

inline const char* to_string(StepCase c) {
    switch (c) {
        case StepCase::QOnly: return "QOnly";
        case StepCase::DualPQ: return "DualPQ";
        case StepCase::Infeasible: return "Infeasible";
        case StepCase::NoCompNeeded: return "NoCompNeeded";
    }
    return "?";
}

inline StepCase to_step_case(DispatchCase c) {
    switch (c) {
        case DispatchCase::QOnly: return StepCase::QOnly;
        case DispatchCase::DualPQ: return StepCase::DualPQ;
        case DispatchCase::Infeasible: return StepCase::Infeasible;
    }
    return StepCase::Infeasible;
}

struct SimRecord {
    double t = 0.0;
    PerUnit vs = 0.0;
    StepCase step_case = StepCase::NoCompNeeded;
    PerUnit vl_effective = 0.0;
    PerUnit q_cmd = 0.0;
    PerUnit p_vrt_cmd = 0.0;
    SimMode mode = SimMode::OnGrid;
    bool on_grid = true;
};

struct SimSummary {
    double time_off_grid = 0.0;
    PerUnit max_abs_q = 0.0;
    PerUnit max_p_vrt = 0.0;
    double nongrid_energy = 0.0;  ///< trapezoidal integral of p_vrt_cmd, pu*s
    std::size_t disconnect_count = 0;
    PerUnit deepest_vs = 0.0;
};

namespace detail {

/// What the load bus looks like for one on-grid sample.
struct Supply {
    StepCase step_case = StepCase::NoCompNeeded;
    PerUnit vl_effective = 0.0;
    PerUnit q_cmd = 0.0;
    PerUnit p_vrt_cmd = 0.0;
    bool untenable = false;  ///< collapse or infeasible dispatch: transfer now
};

inline Supply evaluate_supply(PerUnit vs, const SubstationParams& params,
                              const DispatchPolicy& policy,
                              bool compensation_enabled) {
    Supply s;
    if (vs <= 0.0) {
        // Total loss of the source is untenable either way.
        s.step_case = compensation_enabled ? StepCase::Infeasible
                                           : StepCase::NoCompNeeded;
        s.untenable = true;
        return s;
    }
    if (compensation_enabled) {
        const DispatchDecision d = dispatch(vs, params, policy);
        s.step_case = to_step_case(d.kind);
        if (d.kind == DispatchCase::Infeasible) {
            s.untenable = true;
            return s;
        }
        s.vl_effective = params.v_l;
        s.q_cmd = d.q_total;
        s.p_vrt_cmd = d.p_vrt;
        return s;
    }
    s.step_case = StepCase::NoCompNeeded;
    const auto vl = try_uncompensated_load_voltage(vs, params.p_load, params.x);
    if (!vl) {
        s.untenable = true;
        return s;
    }
    s.vl_effective = *vl;
    return s;
}

}  // namespace detail

/// Advances the state machine by one sample and returns the record for it.
/// The record reflects the end-of-step mode: a sample that triggers a
/// transfer is already logged off-grid with zeroed commands.
inline SimRecord step(SimState& state, const TraceSample& sample,
                      const SubstationParams& params, const UpsConfig& ups,
                      const DispatchPolicy& policy,
                      bool compensation_enabled) {
    const double dt =
        state.has_time ? sample.t - state.last_time : 0.0;
    if (dt < 0.0) {
        throw std::domain_error("step: sample time moved backwards");
    }
    state.has_time = true;
    state.last_time = sample.t;

    SimRecord rec;
    rec.t = sample.t;
    rec.vs = sample.vs;

    auto run_on_grid = [&] {
        const detail::Supply s = detail::evaluate_supply(
            sample.vs, params, policy, compensation_enabled);
        rec.step_case = s.step_case;
        if (s.untenable) {
            // Protection takes priority: no transfer_delay grace.
            state.mode = SimMode::Emergency;
            state.window_timer = 0.0;
            state.window_violated = false;
            return;
        }
        const bool violated =
            s.vl_effective < ups.v_low || s.vl_effective > ups.v_high;
        if (violated) {
            state.window_timer =
                state.window_violated ? state.window_timer + dt : 0.0;
            state.window_violated = true;
            if (state.window_timer >= ups.transfer_delay - timer_slack) {
                state.mode = SimMode::Emergency;
                state.window_timer = 0.0;
                state.window_violated = false;
                return;
            }
        } else {
            state.window_timer = 0.0;
            state.window_violated = false;
        }
        rec.vl_effective = s.vl_effective;
        rec.q_cmd = s.q_cmd;
        rec.p_vrt_cmd = s.p_vrt_cmd;
    };

    switch (state.mode) {
        case SimMode::OnGrid:
            run_on_grid();
            break;
        case SimMode::Emergency:
            if (sample.vs >= ups.reconnect_threshold) {
                state.mode = SimMode::ReconnectWait;
                state.window_timer = 0.0;
            }
            break;
        case SimMode::ReconnectWait:
            if (sample.vs >= ups.reconnect_threshold) {
                state.window_timer += dt;
                if (state.window_timer >= ups.reconnect_delay - timer_slack) {
                    state.mode = SimMode::OnGrid;
                    state.window_timer = 0.0;
                    state.window_violated = false;
                    run_on_grid();
                }
            } else {
                state.mode = SimMode::Emergency;
                state.window_timer = 0.0;
            }
            break;
    }

    if (state.mode != SimMode::OnGrid) {
        // Off grid the UPS carries the load at rated voltage; nothing is
        // commanded from the compensation resource.
        rec.vl_effective = params.v_l;
        rec.q_cmd = 0.0;
        rec.p_vrt_cmd = 0.0;
        if (!compensation_enabled) {
            rec.step_case = StepCase::NoCompNeeded;
        } else if (sample.vs <= 0.0) {
            rec.step_case = StepCase::Infeasible;
        } else {
            rec.step_case = to_step_case(classify(sample.vs, params, policy));
        }
    }

    rec.mode = state.mode;
    rec.on_grid = state.mode == SimMode::OnGrid;
    state.compensation_active =
        rec.on_grid && compensation_enabled &&
        rec.step_case != StepCase::Infeasible;
    return rec;
}

/// Replays a whole trace from a fresh on-grid state. The log has one record
/// per sample.
inline std::vector<SimRecord> run(const DipTrace& trace,
                                  const SubstationParams& params,
                                  const UpsConfig& ups,
                                  const DispatchPolicy& policy,
                                  bool compensation_enabled) {
    trace.validate();
    params.validate();
    ups.validate();
    policy.validate();
    SimState state;
    std::vector<SimRecord> log;
    log.reserve(trace.samples.size());
    for (const auto& sample : trace.samples) {
        log.push_back(
            step(state, sample, params, ups, policy, compensation_enabled));
    }
    return log;
}

/// Aggregates a replay log. Each record's values are held over the interval
/// to the next sample; the last record contributes no duration.
inline SimSummary summarize(const std::vector<SimRecord>& log) {
    if (log.empty()) {
        throw std::domain_error("summarize: empty log");
    }
    SimSummary sum;
    sum.deepest_vs = log.front().vs;
    bool prev_on_grid = true;
    for (std::size_t i = 0; i < log.size(); ++i) {
        const auto& r = log[i];
        sum.max_abs_q = std::max(sum.max_abs_q, std::abs(r.q_cmd));
        sum.max_p_vrt = std::max(sum.max_p_vrt, r.p_vrt_cmd);
        sum.deepest_vs = std::min(sum.deepest_vs, r.vs);
        if (!r.on_grid && prev_on_grid) ++sum.disconnect_count;
        prev_on_grid = r.on_grid;
        if (i + 1 < log.size()) {
            const double dt = log[i + 1].t - r.t;
            if (!r.on_grid) sum.time_off_grid += dt;
            sum.nongrid_energy +=
                0.5 * (r.p_vrt_cmd + log[i + 1].p_vrt_cmd) * dt;
        }
    }
    return sum;
}

}  // namespace vrt
