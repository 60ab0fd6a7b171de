#pragma once

// Run configuration: one strict JSON document. Every numeric field is per
// unit or SI seconds; unknown keys are rejected so unit mistakes cannot ride
// in silently. Missing keys keep their defaults.

#include "vrt/dispatch.hpp"
#include "vrt/power_flow.hpp"
#include "vrt/simulation.hpp"

#include <json.hpp>

#include <fstream>
#include <string>

namespace vrt {

using nlohmann::json;

/// Everything a CLI run needs.
struct RunConfig {
    SubstationParams substation;
    UpsConfig ups;
    DispatchPolicy policy;
    std::string output_dir = "out";

    void validate() const {
        substation.validate();
        ups.validate();
        policy.validate();
    }
};

/// Raised on structural or semantic config problems.
struct ConfigError : Error {
    using Error::Error;
};

namespace detail {

inline void require_object(const json& j, const std::string& where) {
    if (!j.is_object()) {
        throw ConfigError("config: " + where + " must be a JSON object");
    }
}

inline void reject_unknown(const json& j, const std::string& where,
                           std::initializer_list<const char*> known) {
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const char* k : known) {
            if (key == k) {
                ok = true;
                break;
            }
        }
        if (!ok) {
            throw ConfigError("config: unknown key '" + where + key + "'");
        }
    }
}

inline void read_number(const json& j, const char* key,
                        const std::string& where, double& out) {
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    if (!v.is_number()) {
        throw ConfigError("config: '" + where + key + "' must be a number");
    }
    out = v.get<double>();
}

}  // namespace detail

inline RunConfig config_from_json(const json& j) {
    detail::require_object(j, "document root");
    detail::reject_unknown(j, "",
                           {"substation", "ups", "policy", "output_dir"});
    RunConfig cfg;
    if (j.contains("substation")) {
        const json& s = j.at("substation");
        detail::require_object(s, "substation");
        detail::reject_unknown(s, "substation.",
                               {"x", "s_max", "v_l", "p_load"});
        detail::read_number(s, "x", "substation.", cfg.substation.x);
        detail::read_number(s, "s_max", "substation.", cfg.substation.s_max);
        detail::read_number(s, "v_l", "substation.", cfg.substation.v_l);
        detail::read_number(s, "p_load", "substation.", cfg.substation.p_load);
    }
    if (j.contains("ups")) {
        const json& u = j.at("ups");
        detail::require_object(u, "ups");
        detail::reject_unknown(u, "ups.",
                               {"v_low", "v_high", "transfer_delay_s",
                                "reconnect_threshold", "reconnect_delay_s"});
        detail::read_number(u, "v_low", "ups.", cfg.ups.v_low);
        detail::read_number(u, "v_high", "ups.", cfg.ups.v_high);
        detail::read_number(u, "transfer_delay_s", "ups.",
                            cfg.ups.transfer_delay);
        detail::read_number(u, "reconnect_threshold", "ups.",
                            cfg.ups.reconnect_threshold);
        detail::read_number(u, "reconnect_delay_s", "ups.",
                            cfg.ups.reconnect_delay);
    }
    if (j.contains("policy")) {
        const json& p = j.at("policy");
        detail::require_object(p, "policy");
        detail::reject_unknown(p, "policy.",
                               {"q_selection_fraction", "boundary_epsilon"});
        detail::read_number(p, "q_selection_fraction", "policy.",
                            cfg.policy.q_selection_fraction);
        detail::read_number(p, "boundary_epsilon", "policy.",
                            cfg.policy.boundary_epsilon);
    }
    if (j.contains("output_dir")) {
        if (!j.at("output_dir").is_string()) {
            throw ConfigError("config: 'output_dir' must be a string");
        }
        cfg.output_dir = j.at("output_dir").get<std::string>();
    }
    try {
        cfg.validate();
    } catch (const std::domain_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return cfg;
}

inline json config_to_json(const RunConfig& cfg) {
    return json{
        {"substation",
         {{"x", cfg.substation.x},
          {"s_max", cfg.substation.s_max},
          {"v_l", cfg.substation.v_l},
          {"p_load", cfg.substation.p_load}}},
        {"ups",
         {{"v_low", cfg.ups.v_low},
          {"v_high", cfg.ups.v_high},
          {"transfer_delay_s", cfg.ups.transfer_delay},
          {"reconnect_threshold", cfg.ups.reconnect_threshold},
          {"reconnect_delay_s", cfg.ups.reconnect_delay}}},
        {"policy",
         {{"q_selection_fraction", cfg.policy.q_selection_fraction},
          {"boundary_epsilon", cfg.policy.boundary_epsilon}}},
        {"output_dir", cfg.output_dir}};
}

/// Loads and validates a config file; parse errors carry nlohmann's
/// line/column diagnostics.
inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("config: cannot open '" + path + "'");
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config: " + std::string(e.what()));
    }
    return config_from_json(j);
}

inline json thresholds_to_json(const Thresholds& t) {
    return json{{"vs_theory", t.vs_theory},
                {"vs_min", t.vs_min},
                {"vs_m", t.vs_m}};
}

inline json decision_to_json(const DispatchDecision& d) {
    json j{{"case", to_string(d.kind)}};
    if (d.kind != DispatchCase::Infeasible) {
        j["q_total"] = d.q_total;
        j["p_grid"] = d.p_grid;
        j["p_vrt"] = d.p_vrt;
        j["s_grid"] = d.s_grid;
        j["s_nongrid"] = d.s_nongrid;
        j["delta_rad"] = d.delta;
    } else {
        j["disconnect"] = true;
    }
    return j;
}

inline json summary_to_json(const SimSummary& s) {
    return json{{"time_off_grid_s", s.time_off_grid},
                {"max_abs_q", s.max_abs_q},
                {"max_p_vrt", s.max_p_vrt},
                {"nongrid_energy_pus", s.nongrid_energy},
                {"disconnect_count", s.disconnect_count},
                {"deepest_vs", s.deepest_vs}};
}

}  // namespace vrt
