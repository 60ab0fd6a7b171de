#include <catch2/catch_amalgamated.hpp>

#include "oracle_helpers.hpp"
#include "vrt/csv.hpp"
#include "vrt/simulation.hpp"

#include <algorithm>
#include <cmath>

using namespace vrt;
using Catch::Approx;

namespace {

SubstationParams defaults() { return {}; }

/// Rectangular dip: vs = depth for t in [t0, t1), rated 1.0 elsewhere.
/// Samples every dt from 0 through t_end inclusive; dip membership is
/// decided on sample indices so edge samples land deterministically.
DipTrace rect_dip(double t0, double t1, double depth, double t_end,
                  double dt = 1e-3) {
    DipTrace trace;
    const auto n = static_cast<std::size_t>(std::llround(t_end / dt));
    const auto i0 = static_cast<std::size_t>(std::llround(t0 / dt));
    const auto i1 = static_cast<std::size_t>(std::llround(t1 / dt));
    trace.samples.reserve(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        const double t = static_cast<double>(i) * dt;
        trace.samples.push_back({t, (i >= i0 && i < i1) ? depth : 1.0});
    }
    return trace;
}

std::size_t count_off_grid(const std::vector<SimRecord>& log) {
    return static_cast<std::size_t>(std::count_if(
        log.begin(), log.end(), [](const SimRecord& r) { return !r.on_grid; }));
}

}  // namespace

TEST_CASE("steady rated voltage stays on grid with a small Q command",
          "[simulation]") {
    DipTrace trace = rect_dip(1.0, 1.0, 1.0, 0.1);  // no dip at all
    const auto log = run(trace, defaults(), {}, {}, true);
    REQUIRE(log.size() == trace.samples.size());
    for (const auto& r : log) {
        CHECK(r.on_grid);
        CHECK(r.mode == SimMode::OnGrid);
        CHECK(r.step_case == StepCase::QOnly);
        CHECK(r.q_cmd == Approx(-0.08166694905682448).margin(1e-9));
        CHECK(r.p_vrt_cmd == 0.0);
        CHECK(r.vl_effective == 1.0);
    }
}

TEST_CASE("compensated shallow dip rides through", "[simulation]") {
    const DipTrace trace = rect_dip(0.05, 0.2, 0.86, 0.3);
    const auto log = run(trace, defaults(), {}, {}, true);
    const SimSummary sum = summarize(log);
    CHECK(sum.time_off_grid == 0.0);
    CHECK(sum.disconnect_count == 0);
    CHECK(sum.max_abs_q == Approx(0.79).margin(0.01));
    CHECK(sum.max_p_vrt == 0.0);
    CHECK(sum.deepest_vs == 0.86);
}

TEST_CASE("uncompensated shallow dip transfers after the window delay",
          "[simulation]") {
    const DipTrace trace = rect_dip(0.05, 0.2, 0.86, 0.3);
    const auto log = run(trace, defaults(), {}, {}, false);

    // While still on grid during the dip the load bus sags to the quadratic
    // solution, below the 0.85 window.
    const auto& during = log[60];  // t = 0.060
    CHECK(during.on_grid);
    CHECK(during.step_case == StepCase::NoCompNeeded);
    CHECK(during.vl_effective == Approx(0.8323675051717204).margin(1e-9));
    CHECK(during.vl_effective < 0.85);

    // First off-grid record lands one transfer_delay after dip onset.
    auto first_off = std::find_if(log.begin(), log.end(),
                                  [](const SimRecord& r) { return !r.on_grid; });
    REQUIRE(first_off != log.end());
    CHECK(first_off->t == Approx(0.05 + 0.02).margin(1e-9));
    CHECK(first_off->mode == SimMode::Emergency);
    CHECK(first_off->q_cmd == 0.0);
    CHECK(first_off->vl_effective == 1.0);  // UPS output

    const SimSummary sum = summarize(log);
    CHECK(sum.time_off_grid > 0.0);
    CHECK(sum.disconnect_count == 1);
}

TEST_CASE("violation shorter than the transfer delay does not transfer",
          "[simulation]") {
    const DipTrace trace = rect_dip(0.05, 0.06, 0.86, 0.2);  // 10 ms only
    const auto log = run(trace, defaults(), {}, {}, false);
    CHECK(count_off_grid(log) == 0);
}

TEST_CASE("window timer resets when the violation clears", "[simulation]") {
    // Two 10 ms dips 40 ms apart: 20 ms of cumulative violation but never
    // 20 ms of continuous violation, so no transfer.
    DipTrace trace;
    for (std::size_t i = 0; i <= 200; ++i) {
        const double t = static_cast<double>(i) * 1e-3;
        const bool dipped = (i >= 50 && i < 60) || (i >= 100 && i < 110);
        trace.samples.push_back({t, dipped ? 0.86 : 1.0});
    }
    const auto log = run(trace, defaults(), {}, {}, false);
    CHECK(count_off_grid(log) == 0);
}

TEST_CASE("steady rated voltage without compensation stays in the window",
          "[simulation]") {
    const DipTrace trace = rect_dip(1.0, 1.0, 1.0, 0.1);
    const auto log = run(trace, defaults(), {}, {}, false);
    for (const auto& r : log) {
        CHECK(r.on_grid);
        CHECK(r.step_case == StepCase::NoCompNeeded);
        CHECK(r.q_cmd == 0.0);
        // The passive sag at full load, above the 0.85 UPS floor.
        CHECK(r.vl_effective == Approx(0.98309518948453).margin(1e-9));
        CHECK(r.vl_effective > 0.85);
    }
}

TEST_CASE("compensated deep dip rides through on dual PQ", "[simulation]") {
    const DipTrace trace = rect_dip(0.05, 0.2, 0.76, 0.3);
    const auto log = run(trace, defaults(), {}, {}, true);
    const SimSummary sum = summarize(log);
    CHECK(sum.time_off_grid == 0.0);
    CHECK(sum.max_p_vrt == Approx(0.625).margin(1e-3));
    CHECK(sum.max_abs_q == Approx(1.21).margin(1e-3));
    // Trapezoidal energy: full value across the 0.15 s dip, half-weighted
    // at both edges, one sample interval each side.
    CHECK(sum.nongrid_energy == Approx(0.625 * 0.15).margin(1e-3));

    const auto& during = log[100];
    CHECK(during.step_case == StepCase::DualPQ);
    CHECK(during.vl_effective == 1.0);
}

TEST_CASE("infeasible dip transfers immediately and reconnects after the wait",
          "[simulation]") {
    const DipTrace trace = rect_dip(0.05, 0.2, 0.50, 12.0);
    const auto log = run(trace, defaults(), {}, {}, true);

    auto first_off = std::find_if(log.begin(), log.end(),
                                  [](const SimRecord& r) { return !r.on_grid; });
    REQUIRE(first_off != log.end());
    // Protection acts on the first infeasible sample, no transfer delay.
    CHECK(first_off->t == Approx(0.05).margin(1e-12));
    CHECK(first_off->step_case == StepCase::Infeasible);

    // Recovery at t = 0.2; reconnection only after the full 10 s wait.
    auto back_on = std::find_if(first_off, log.end(),
                                [](const SimRecord& r) { return r.on_grid; });
    REQUIRE(back_on != log.end());
    CHECK(back_on->t == Approx(0.2 + 10.0).margin(1e-9));
    CHECK(back_on->t >= 0.2 + 10.0 - 1e-9);

    const SimSummary sum = summarize(log);
    CHECK(sum.disconnect_count == 1);
    CHECK(sum.deepest_vs == 0.50);
    CHECK(sum.time_off_grid == Approx(10.15).margin(1e-6));

    // Hysteresis: every return to the grid passes through ReconnectWait.
    for (std::size_t i = 1; i < log.size(); ++i) {
        if (log[i].mode == SimMode::OnGrid &&
            log[i - 1].mode != SimMode::OnGrid) {
            CHECK(log[i - 1].mode == SimMode::ReconnectWait);
        }
    }
}

TEST_CASE("a dip to zero source voltage is a modeled outcome, not a fault",
          "[simulation]") {
    const DipTrace trace = rect_dip(0.05, 0.2, 0.0, 0.3);
    for (bool comp : {true, false}) {
        const auto log = run(trace, defaults(), {}, {}, comp);
        const SimSummary sum = summarize(log);
        CHECK(sum.disconnect_count == 1);
        CHECK(sum.deepest_vs == 0.0);
    }
}

TEST_CASE("uncompensated collapse also transfers immediately", "[simulation]") {
    const DipTrace trace = rect_dip(0.05, 0.2, 0.50, 0.3);
    const auto log = run(trace, defaults(), {}, {}, false);
    auto first_off = std::find_if(log.begin(), log.end(),
                                  [](const SimRecord& r) { return !r.on_grid; });
    REQUIRE(first_off != log.end());
    CHECK(first_off->t == Approx(0.05).margin(1e-12));
    CHECK(summarize(log).disconnect_count == 1);
}

TEST_CASE("interrupted recovery restarts the reconnect wait", "[simulation]") {
    // Recover at 0.2, dip again at 5.0 for half a second, recover at 5.5:
    // the load may only return 10 s after the second recovery.
    DipTrace trace;
    for (std::size_t i = 0; i <= 1700; ++i) {
        const double t = static_cast<double>(i) * 0.01;
        double vs = 1.0;
        if (t >= 0.05 && t < 0.2) vs = 0.5;
        if (t >= 5.0 && t < 5.5) vs = 0.5;
        trace.samples.push_back({t, vs});
    }
    const auto log = run(trace, defaults(), {}, {}, true);
    auto back_on = std::find_if(log.begin(), log.end(), [](const SimRecord& r) {
        return !r.on_grid;
    });
    REQUIRE(back_on != log.end());
    auto on_again = std::find_if(back_on, log.end(), [](const SimRecord& r) {
        return r.on_grid;
    });
    REQUIRE(on_again != log.end());
    CHECK(on_again->t >= 5.5 + 10.0 - 1e-9);
    CHECK(summarize(log).disconnect_count == 1);
}

TEST_CASE("zero-order hold accumulates irregular sample intervals",
          "[simulation]") {
    // Violation observed at t = 0.05; the next sample 30 ms later already
    // exceeds the 20 ms transfer delay.
    DipTrace trace;
    trace.samples = {{0.0, 1.0}, {0.05, 0.86}, {0.08, 0.86}, {0.1, 0.86}};
    const auto log = run(trace, defaults(), {}, {}, false);
    CHECK(log[0].on_grid);
    CHECK(log[1].on_grid);
    CHECK_FALSE(log[2].on_grid);
}

TEST_CASE("replay is deterministic", "[simulation]") {
    const DipTrace trace = rect_dip(0.05, 0.2, 0.76, 0.4);
    const auto a = run(trace, defaults(), {}, {}, true);
    const auto b = run(trace, defaults(), {}, {}, true);
    CHECK(sim_log_csv(a) == sim_log_csv(b));
}

TEST_CASE("trace and log validation", "[simulation]") {
    DipTrace empty;
    CHECK_THROWS_AS(run(empty, defaults(), {}, {}, true), std::domain_error);

    DipTrace backwards;
    backwards.samples = {{0.0, 1.0}, {0.0, 1.0}};
    CHECK_THROWS_AS(backwards.validate(), std::domain_error);

    DipTrace negative_vs;
    negative_vs.samples = {{0.0, -0.1}};
    CHECK_THROWS_AS(negative_vs.validate(), std::domain_error);

    CHECK_THROWS_AS(summarize({}), std::domain_error);
}

TEST_CASE("ups config validation", "[simulation]") {
    UpsConfig bad;
    bad.reconnect_threshold = 0.8;  // below v_low
    CHECK_THROWS_AS(bad.validate(), std::domain_error);
    bad = {};
    bad.transfer_delay = -1.0;
    CHECK_THROWS_AS(bad.validate(), std::domain_error);
}

TEST_CASE("summary arithmetic on synthetic logs", "[simulation]") {
    SECTION("all on grid") {
        std::vector<SimRecord> log(3);
        for (std::size_t i = 0; i < log.size(); ++i) {
            log[i].t = static_cast<double>(i) * 0.1;
            log[i].on_grid = true;
            log[i].mode = SimMode::OnGrid;
        }
        CHECK(summarize(log).time_off_grid == 0.0);
        CHECK(summarize(log).disconnect_count == 0);
    }
    SECTION("constant p_vrt integrates as a rectangle") {
        std::vector<SimRecord> log;
        for (std::size_t i = 0; i <= 150; ++i) {
            SimRecord r;
            r.t = static_cast<double>(i) * 1e-3;
            r.p_vrt_cmd = 0.625;
            r.on_grid = true;
            r.mode = SimMode::OnGrid;
            log.push_back(r);
        }
        CHECK(summarize(log).nongrid_energy == Approx(0.09375).margin(1e-12));
    }
    SECTION("one emergency episode counts one disconnect") {
        std::vector<SimRecord> log(5);
        for (std::size_t i = 0; i < log.size(); ++i) {
            log[i].t = static_cast<double>(i);
            const bool off = i == 2 || i == 3;
            log[i].on_grid = !off;
            log[i].mode = off ? SimMode::Emergency : SimMode::OnGrid;
        }
        const SimSummary sum = summarize(log);
        CHECK(sum.disconnect_count == 1);
        CHECK(sum.time_off_grid == Approx(2.0).margin(1e-12));
    }
}
