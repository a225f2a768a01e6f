#pragma once

// Text artifacts: stats CSV, run summary JSON, coloring dump and trajectory
// CSV. Every artifact carries the resolved run settings.

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "treecolor/certifier.hpp"
#include "treecolor/coloring_state.hpp"
#include "treecolor/stats.hpp"

namespace treecolor {

using ConfigEntries = std::vector<std::pair<std::string, std::string>>;

/// Shortest decimal text that reads back to the same double.
std::string format_double(double x);

/// "z_<d>_<c>" column names in canonical type order.
std::vector<std::string> type_columns(const PaletteConfig& cfg);

/// Leading "# key=value" lines, then the header
/// step,time,uncolored_frac,red_frac,extra_frac,active,mean_cascade,max_cascade,z_...
/// and one row per step.
void write_stats_csv(std::ostream& out, const RunStats& stats, const ConfigEntries& config);

/// The final fields of a run as a JSON object, with the settings under
/// "config".
std::string summary_json(const RunStats& stats, const ConfigEntries& config);

/// Line 1 "n r p", then "v color" per vertex (0..p-1 palette, p extra, and
/// "red" / "uncolored" for incomplete colorings), then "# key=value" lines.
void write_coloring_dump(std::ostream& out, const ColoringState& state, const ConfigEntries& config);

struct ColoringDump {
    int n = 0;
    int r = 0;
    int p = 0;
    std::vector<Color> colors;
    ConfigEntries config;

    std::optional<std::string> value(const std::string& key) const;
};

/// Throws ParseError on malformed or empty input, naming the line.
ColoringDump read_coloring_dump(std::istream& in);

/// Leading "# key=value" lines, then time,g,remainder_growth,z_... per sample.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj, const ConfigEntries& config);

} // namespace treecolor
