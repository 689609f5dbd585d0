// io.hpp
// File formats: ring spec JSON, CSV traces, self-contained SVG line charts,
// and density-matrix dumps. All emitters are deterministic: fixed
// formatting, 12 significant digits, no timestamps.

#pragma once

#include "turnplate/dynamics.hpp"
#include "turnplate/fock.hpp"
#include "turnplate/ring.hpp"

#include <string>
#include <vector>

namespace turnplate {

// {"n_sites": N, "couplings": [{"mag": .., "phase": ..}, ...]} or the
// convenience form {"n_sites": N, "uniform": {"mag": .., "total_phase": ..}}.
// Documents wrapping a spec under "effective_spec" are unwrapped.
RingSpec load_spec(const std::string& path);
RingSpec parse_spec(const std::string& json_text);
std::string dump_spec(const RingSpec& spec);

std::string format_double(double x); // %.12g

// header "t,<prefix>1,...,<prefix>N", one row per grid point
std::string trace_to_csv(const TraceSeries& trace, const std::string& prefix);

// Self-contained polyline chart with axes, ticks and a legend.
std::string trace_to_svg(const TraceSeries& trace, const std::vector<std::string>& labels,
                         const std::string& y_label);

// {"dim": d, "matrix": [[re, im], ...]} row-major
std::string density_to_json(const ModeDensity& rho);

void write_file(const std::string& path, const std::string& content);

} // namespace turnplate
