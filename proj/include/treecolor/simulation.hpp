#pragma once

// End-to-end run: graph generation, phase 1, completion of the remainder and
// the tidy-up to a proper coloring with the extra color.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "treecolor/completion.hpp"
#include "treecolor/graph.hpp"
#include "treecolor/stats.hpp"

namespace treecolor {

using ConfigEntries = std::vector<std::pair<std::string, std::string>>;

struct SimulationConfig {
    PaletteConfig cfg;
    TuningParams tuning;
    long n = 0;
    GraphKind kind = GraphKind::random_regular;
    /// Depth of the tree ball when kind is tree_ball.
    int radius = 0;
    std::uint64_t graph_seed = 0;
    std::uint64_t seed = 0;
    long steps = 0;
    bool modified = false;
    bool full_checks = false;
    /// Run completion and tidy-up after phase 1.
    bool finish = true;
};

/// Throws ConfigurationError on inconsistent settings.
void validate(const SimulationConfig& config);

std::shared_ptr<const Graph> build_graph(const SimulationConfig& config);

struct SimulationResult {
    RunStats stats;
    std::unique_ptr<ColoringState> state;
    /// Uncolored components and empirical distribution right after phase 1.
    ComponentStats phase1_components;
    TypeDistribution phase1_z;
    CompletionReport completion;
    TidyReport tidy;
    std::vector<Violation> violations;
};

SimulationResult simulate(const SimulationConfig& config);

/// The resolved settings as key/value pairs, embedded in every artifact.
ConfigEntries describe(const SimulationConfig& config);

/// "d,c:w;d,c:w;..." over the whole type space.
std::string weights_to_string(const TypeVector& weights);

/// Steps needed to reach time x: ceil(x / epsilon) with a small tolerance
/// for round-off.
long steps_for_time(double x, double epsilon);

} // namespace treecolor
