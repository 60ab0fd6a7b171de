#pragma once

// CSV emission and trace ingestion. Emitted CSV is deterministic: '.'
// decimal, comma delimiter, LF line endings, 9 significant digits.

#include "vrt/circles.hpp"
#include "vrt/simulation.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <numbers>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace vrt {

/// Number formatting shared by every emitted artifact.
inline std::string format_pu(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

inline std::string loci_csv(const std::vector<CircleLocus>& family) {
    std::ostringstream os;
    os << "vs,delta_deg,p,q\n";
    for (const auto& locus : family) {
        for (const auto& pt : locus.points) {
            os << format_pu(locus.vs) << ','
               << format_pu(pt.delta * 180.0 / std::numbers::pi) << ','
               << format_pu(pt.p) << ',' << format_pu(pt.q) << '\n';
        }
    }
    return os.str();
}

inline std::string s_curve_csv(const std::vector<SCurvePoint>& curve) {
    std::ostringstream os;
    os << "vs,q,s\n";
    for (const auto& pt : curve) {
        os << format_pu(pt.vs) << ',' << format_pu(pt.q) << ','
           << format_pu(pt.s) << '\n';
    }
    return os.str();
}

inline std::string sim_log_csv(const std::vector<SimRecord>& log) {
    std::ostringstream os;
    os << "t_s,vs_pu,case,vl_effective,q_cmd,p_vrt_cmd,mode,on_grid\n";
    for (const auto& r : log) {
        os << format_pu(r.t) << ',' << format_pu(r.vs) << ','
           << to_string(r.step_case) << ',' << format_pu(r.vl_effective)
           << ',' << format_pu(r.q_cmd) << ',' << format_pu(r.p_vrt_cmd)
           << ',' << to_string(r.mode) << ',' << (r.on_grid ? 1 : 0) << '\n';
    }
    return os.str();
}

/// Raised on malformed trace input; the message carries the 1-based row.
struct TraceFormatError : Error {
    using Error::Error;
};

namespace detail {

inline bool parse_double(std::string_view field, double& out) {
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

}  // namespace detail

/// Parses a `t_s,vs_pu` trace. The header row is required verbatim; CRLF
/// input is tolerated, blank trailing lines are ignored.
inline DipTrace parse_trace_csv(std::istream& in) {
    DipTrace trace;
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (row == 1) {
            if (line != "t_s,vs_pu") {
                throw TraceFormatError(
                    "row 1: expected header 't_s,vs_pu', got '" + line + "'");
            }
            continue;
        }
        const auto comma = line.find(',');
        std::ostringstream err;
        err << "row " << row << ": ";
        if (comma == std::string::npos ||
            line.find(',', comma + 1) != std::string::npos) {
            err << "expected exactly two comma-separated fields";
            throw TraceFormatError(err.str());
        }
        TraceSample s;
        if (!detail::parse_double(std::string_view(line).substr(0, comma), s.t)) {
            err << "bad t_s value '" << line.substr(0, comma) << "'";
            throw TraceFormatError(err.str());
        }
        if (!detail::parse_double(std::string_view(line).substr(comma + 1),
                                  s.vs)) {
            err << "bad vs_pu value '" << line.substr(comma + 1) << "'";
            throw TraceFormatError(err.str());
        }
        trace.samples.push_back(s);
    }
    if (row == 0) {
        throw TraceFormatError("row 1: empty trace file, header required");
    }
    try {
        trace.validate();
    } catch (const std::domain_error& e) {
        throw TraceFormatError(e.what());
    }
    return trace;
}

inline std::string trace_csv(const DipTrace& trace) {
    std::ostringstream os;
    os << "t_s,vs_pu\n";
    for (const auto& s : trace.samples) {
        os << format_pu(s.t) << ',' << format_pu(s.vs) << '\n';
    }
    return os.str();
}

}  // namespace vrt
