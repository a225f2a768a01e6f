#pragma once

// Phase 2: coloring the finite uncolored components left by phase 1, and
// the final repair that replaces red vertices using the extra color.

#include <utility>
#include <vector>

#include "treecolor/coloring_state.hpp"
#include "treecolor/rng.hpp"

namespace treecolor {

struct CompletionReport {
    long components = 0;
    long tree_components = 0;
    long vertices_colored = 0;
    long failures = 0;
    /// Vertices turned red because their component could not be colored.
    long failed_vertices = 0;
    long max_component = 0;
    /// Component size histogram: size -> count.
    std::vector<std::pair<long, long>> size_histogram;
};

/// Colors every connected component of uncolored vertices from the
/// vertices' available palette colors: tree components root-to-leaf, others
/// by exact backtracking under the node budget. Components that fail are
/// made red.
CompletionReport complete_remainder(ColoringState& state, const CounterRng& rng,
                                    long node_budget = 1'000'000);

struct TidyReport {
    long red_before = 0;
    long erased = 0;
    long components = 0;
    long extra_used = 0;
    long failures = 0;
    /// Vertices left red because their component could not be colored.
    long red_after = 0;
};

/// Erases the colors on red vertices and their neighbors, then recolors:
/// a formerly non-red vertex from {its previous color, extra}, a formerly
/// red vertex from the palette and extra, minus colors of colored
/// neighbors. Requires a total coloring (no uncolored vertex).
TidyReport tidy_to_proper(ColoringState& state, const CounterRng& rng, long node_budget = 1'000'000);

struct Violation {
    int u = -1;
    int v = -1;
    Color color = kUncolored;
};

/// Every edge whose endpoints carry the same color, red and extra included.
/// Uncolored endpoints are ignored.
std::vector<Violation> verify_proper(const ColoringState& state);

} // namespace treecolor
