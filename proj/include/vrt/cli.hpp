#pragma once

// Command-line front end: thresholds | dispatch | circles | scurve |
// simulate. Emits CSV/JSON/SVG artifacts under --out; --json switches stdout
// to machine-readable reports. VRT_NO_COLOR disables terminal styling.

#include "vrt/circles.hpp"
#include "vrt/config.hpp"
#include "vrt/csv.hpp"
#include "vrt/dispatch.hpp"
#include "vrt/simulation.hpp"
#include "vrt/svg.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#ifndef _WIN32
#include <unistd.h>
#endif

namespace vrt::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_config_error = 2,
    exit_trace_error = 3,
    exit_infeasible = 4,
};

namespace detail {

inline bool color_enabled() {
#ifndef _WIN32
    if (std::getenv("VRT_NO_COLOR") != nullptr) return false;
    return ::isatty(1) != 0;
#else
    return false;
#endif
}

inline std::string paint(const std::string& text, const char* code) {
    if (!color_enabled()) return text;
    return std::string("\033[") + code + "m" + text + "\033[0m";
}

inline std::string case_label(DispatchCase c) {
    switch (c) {
        case DispatchCase::QOnly: return paint("QOnly", "32");
        case DispatchCase::DualPQ: return paint("DualPQ", "33");
        case DispatchCase::Infeasible: return paint("Infeasible", "31");
    }
    return "?";
}

inline void write_file(const std::filesystem::path& path,
                       const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write '" + path.string() + "'");
    }
    out << content;
}

inline void print_kv(std::ostream& out, const char* key,
                     const std::string& value) {
    out << "  " << key;
    for (std::size_t i = std::string(key).size(); i < 22; ++i) out << ' ';
    out << value << '\n';
}

}  // namespace detail

struct Options {
    RunConfig config;
    std::filesystem::path out_dir;
    bool json = false;
};

inline int cmd_thresholds(const Options& opt, std::ostream& out) {
    const Thresholds t = thresholds_of(opt.config.substation);
    if (opt.json) {
        json j{{"inputs", config_to_json(opt.config)},
               {"thresholds", thresholds_to_json(t)}};
        out << j.dump(2) << '\n';
        return exit_ok;
    }
    out << "Ride-through thresholds (pu)\n";
    detail::print_kv(out, "vs_theory", format_pu(t.vs_theory));
    detail::print_kv(out, "vs_min", format_pu(t.vs_min));
    detail::print_kv(out, "vs_m", format_pu(t.vs_m));
    return exit_ok;
}

inline int cmd_dispatch(const Options& opt, PerUnit vs, std::ostream& out) {
    const auto& params = opt.config.substation;
    const Thresholds t = thresholds_of(params);
    const DispatchDecision d = dispatch(vs, params, opt.config.policy);
    if (opt.json) {
        json j{{"inputs", config_to_json(opt.config)},
               {"vs", vs},
               {"thresholds", thresholds_to_json(t)},
               {"decision", decision_to_json(d)}};
        out << j.dump(2) << '\n';
    } else {
        out << "Dispatch for |Vs| = " << format_pu(vs) << '\n';
        detail::print_kv(out, "case", detail::case_label(d.kind));
        if (d.kind == DispatchCase::Infeasible) {
            out << "  advisory: rated load voltage cannot be held within "
                   "s_max; disconnect (or rerun with a reduced v_l "
                   "target)\n";
        } else {
            detail::print_kv(out, "q_total", format_pu(d.q_total));
            detail::print_kv(out, "p_grid", format_pu(d.p_grid));
            detail::print_kv(out, "p_vrt", format_pu(d.p_vrt));
            detail::print_kv(out, "s_grid", format_pu(d.s_grid));
            detail::print_kv(out, "s_nongrid", format_pu(d.s_nongrid));
            detail::print_kv(out, "delta_deg",
                             format_pu(d.delta * 180.0 / std::numbers::pi));
        }
    }
    return d.kind == DispatchCase::Infeasible ? exit_infeasible : exit_ok;
}

inline int cmd_circles(const Options& opt, const std::vector<double>& vs_list,
                       std::size_t n_points, std::ostream& out) {
    const auto& params = opt.config.substation;
    const auto family = circle_family(params, vs_list, n_points);
    const auto arc = s_max_circle(params.s_max, n_points);

    std::filesystem::create_directories(opt.out_dir);
    const auto csv_path = opt.out_dir / "circles.csv";
    const auto svg_path = opt.out_dir / "circles.svg";
    detail::write_file(csv_path, loci_csv(family));
    detail::write_file(svg_path, svg::circles_figure(family, arc, params));

    if (opt.json) {
        json j{{"files", {csv_path.string(), svg_path.string()}},
               {"loci", family.size()},
               {"points_per_locus", n_points}};
        out << j.dump(2) << '\n';
    } else {
        out << "wrote " << csv_path.string() << " (" << family.size()
            << " loci x " << n_points << " points)\n";
        out << "wrote " << svg_path.string() << '\n';
    }
    return exit_ok;
}

inline int cmd_scurve(const Options& opt, PerUnit vs_lo, PerUnit vs_hi,
                      std::size_t n, std::ostream& out) {
    const auto& params = opt.config.substation;
    const auto curve = s_curve(params, vs_lo, vs_hi, n);
    const SCurveMinimum mn = s_curve_minimum(params);

    std::filesystem::create_directories(opt.out_dir);
    const auto csv_path = opt.out_dir / "scurve.csv";
    const auto svg_path = opt.out_dir / "scurve.svg";
    detail::write_file(csv_path, s_curve_csv(curve));
    detail::write_file(svg_path, svg::s_curve_figure(curve, params));

    if (opt.json) {
        json j{{"files", {csv_path.string(), svg_path.string()}},
               {"samples", curve.size()},
               {"first_vs", curve.front().vs},
               {"min", {{"vs", mn.vs}, {"s", mn.s}}}};
        out << j.dump(2) << '\n';
    } else {
        out << "wrote " << csv_path.string() << " (" << curve.size()
            << " samples, first feasible |Vs| = "
            << format_pu(curve.front().vs) << ")\n";
        out << "wrote " << svg_path.string() << " (min S = "
            << format_pu(mn.s) << " at |Vs| = " << format_pu(mn.vs) << ")\n";
    }
    return exit_ok;
}

inline int cmd_simulate(const Options& opt,
                        const std::vector<std::string>& trace_paths,
                        bool compensation, std::ostream& out) {
    std::filesystem::create_directories(opt.out_dir);
    json manifest = json::array();
    for (const auto& trace_path : trace_paths) {
        std::ifstream in(trace_path);
        if (!in) {
            throw TraceFormatError("cannot open trace '" + trace_path + "'");
        }
        const DipTrace trace = parse_trace_csv(in);
        const auto log = run(trace, opt.config.substation, opt.config.ups,
                             opt.config.policy, compensation);
        const SimSummary sum = summarize(log);

        const auto stem = std::filesystem::path(trace_path).stem().string();
        const auto log_path = opt.out_dir / (stem + "_log.csv");
        const auto sum_path = opt.out_dir / (stem + "_summary.json");
        detail::write_file(log_path, sim_log_csv(log));
        detail::write_file(sum_path, summary_to_json(sum).dump(2) + "\n");

        if (opt.json) {
            manifest.push_back({{"trace", trace_path},
                                {"log", log_path.string()},
                                {"summary_file", sum_path.string()},
                                {"summary", summary_to_json(sum)}});
        } else {
            out << "trace " << trace_path << " (" << trace.samples.size()
                << " samples, compensation "
                << (compensation ? "on" : "off") << ")\n";
            detail::print_kv(out, "time_off_grid_s",
                             format_pu(sum.time_off_grid));
            detail::print_kv(out, "disconnects",
                             std::to_string(sum.disconnect_count));
            detail::print_kv(out, "max_abs_q", format_pu(sum.max_abs_q));
            detail::print_kv(out, "max_p_vrt", format_pu(sum.max_p_vrt));
            detail::print_kv(out, "nongrid_energy_pus",
                             format_pu(sum.nongrid_energy));
            detail::print_kv(out, "deepest_vs", format_pu(sum.deepest_vs));
            out << "  wrote " << log_path.string() << ", "
                << sum_path.string() << '\n';
        }
    }
    if (opt.json) out << manifest.dump(2) << '\n';
    return exit_ok;
}

/// Parses arguments and executes one subcommand. `args` excludes the program
/// name. Returns a process exit code.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out,
                   std::ostream& err) {
    CLI::App app{"Per-unit voltage ride-through analysis for large loads"};
    app.name("vrt");
    // Global flags remain valid after the subcommand name.
    app.fallthrough();

    std::string config_path;
    std::string out_dir_flag;
    bool json_flag = false;
    app.add_option("--config", config_path,
                   "JSON config file (defaults used when omitted)");
    app.add_option("--out", out_dir_flag, "output directory for artifacts");
    app.add_flag("--json", json_flag, "machine-readable output on stdout");
    app.require_subcommand(1);

    auto* sub_thresholds =
        app.add_subcommand("thresholds", "print the ride-through thresholds");

    double dispatch_vs = 1.0;
    auto* sub_dispatch =
        app.add_subcommand("dispatch", "dispatch one dipped source voltage");
    sub_dispatch->add_option("vs", dispatch_vs, "source voltage, pu")
        ->required();

    std::vector<double> circles_vs;
    double circles_from = 0.1, circles_to = 1.3, circles_step = 0.1;
    std::size_t circles_points = 181;
    auto* sub_circles =
        app.add_subcommand("circles", "emit the power-circle family");
    sub_circles->add_option("--vs", circles_vs,
                            "explicit source voltages (overrides the range)");
    sub_circles->add_option("--from", circles_from, "range start, pu");
    sub_circles->add_option("--to", circles_to, "range end, pu");
    sub_circles->add_option("--step", circles_step, "range step, pu");
    sub_circles->add_option("--points", circles_points,
                            "samples per locus (>= 2)");

    double scurve_lo = 0.1, scurve_hi = 1.8;
    std::size_t scurve_n = 171;
    auto* sub_scurve = app.add_subcommand(
        "scurve", "emit apparent power versus source voltage");
    sub_scurve->add_option("--from", scurve_lo, "range start, pu");
    sub_scurve->add_option("--to", scurve_hi, "range end, pu");
    sub_scurve->add_option("--points", scurve_n, "sample count (>= 2)");

    std::vector<std::string> trace_paths;
    bool no_compensation = false;
    auto* sub_simulate =
        app.add_subcommand("simulate", "replay dip traces through the model");
    sub_simulate
        ->add_option("traces", trace_paths, "trace CSV files (t_s,vs_pu)")
        ->required();
    sub_simulate->add_flag("--no-compensation", no_compensation,
                           "replay without any compensation commands");

    std::vector<const char*> argv;
    argv.push_back("vrt");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        Options opt;
        if (!config_path.empty()) opt.config = load_config(config_path);
        opt.config.validate();
        opt.out_dir = out_dir_flag.empty() ? opt.config.output_dir
                                           : out_dir_flag;
        opt.json = json_flag;

        if (*sub_thresholds) return cmd_thresholds(opt, out);
        if (*sub_dispatch) {
            if (!(dispatch_vs > 0.0)) {
                throw ConfigError("dispatch: vs must be > 0");
            }
            return cmd_dispatch(opt, dispatch_vs, out);
        }
        if (*sub_circles) {
            std::vector<double> vs_list = circles_vs;
            if (vs_list.empty()) {
                if (!(circles_step > 0.0) || !(circles_from > 0.0) ||
                    circles_to < circles_from) {
                    throw ConfigError("circles: bad --from/--to/--step range");
                }
                const auto count = static_cast<std::size_t>(
                    std::floor((circles_to - circles_from) / circles_step +
                               1e-9));
                for (std::size_t i = 0; i <= count; ++i) {
                    vs_list.push_back(circles_from +
                                      static_cast<double>(i) * circles_step);
                }
            }
            return cmd_circles(opt, vs_list, circles_points, out);
        }
        if (*sub_scurve) return cmd_scurve(opt, scurve_lo, scurve_hi, scurve_n, out);
        if (*sub_simulate) {
            return cmd_simulate(opt, trace_paths, !no_compensation, out);
        }
        err << "vrt: no subcommand\n";
        return exit_config_error;
    } catch (const ConfigError& e) {
        err << "vrt: " << e.what() << '\n';
        return exit_config_error;
    } catch (const TraceFormatError& e) {
        err << "vrt: trace: " << e.what() << '\n';
        return exit_trace_error;
    } catch (const EmptyCurve& e) {
        err << "vrt: " << e.what() << '\n';
        return exit_infeasible;
    } catch (const std::domain_error& e) {
        err << "vrt: " << e.what() << '\n';
        return exit_config_error;
    } catch (const std::exception& e) {
        err << "vrt: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace vrt::cli
