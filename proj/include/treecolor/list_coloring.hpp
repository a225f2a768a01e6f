#pragma once

#include <span>
#include <vector>

#include "treecolor/coloring_state.hpp"
#include "treecolor/graph.hpp"

namespace treecolor {

inline constexpr long default_node_budget = 1'000'000;

struct ListColoringResult {
    bool success = false;
    bool budget_exhausted = false;
    bool was_tree = false;
    /// Tentative assignments made by the backtracking search.
    long nodes = 0;
    /// Parallel to the vertex list; valid only on success.
    std::vector<Color> colors;
};

/// Proper coloring of the subgraph induced on `vertices` where vertex i takes
/// a color from candidates[i], tried in the given order of preference.
///
/// Trees are colored root-to-leaf. Otherwise vertices whose remaining degree
/// is below their list size are peeled off (they can always be colored
/// afterwards), the leftover core is searched exactly by backtracking with
/// forward checking and a node budget, and the peeled vertices are colored in
/// reverse peeling order.
ListColoringResult solve_list_coloring(const Graph& graph, std::span<const int> vertices,
                                       const std::vector<std::vector<Color>>& candidates,
                                       long node_budget = default_node_budget);

} // namespace treecolor
