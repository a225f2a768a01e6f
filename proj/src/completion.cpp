#include "treecolor/completion.hpp"

#include <algorithm>
#include <map>

#include "treecolor/errors.hpp"
#include "treecolor/list_coloring.hpp"

namespace treecolor {

namespace {

/// Connected components of the subgraph induced on the marked vertices, in
/// order of their smallest vertex, each sorted.
std::vector<std::vector<int>> components_of(const Graph& graph, const std::vector<char>& in_set) {
    std::vector<std::vector<int>> out;
    std::vector<char> seen(in_set.size(), 0);
    for (int root = 0; root < graph.size(); ++root) {
        const auto ri = static_cast<std::size_t>(root);
        if (in_set[ri] == 0 || seen[ri] != 0) {
            continue;
        }
        std::vector<int> comp{root};
        seen[ri] = 1;
        for (std::size_t head = 0; head < comp.size(); ++head) {
            for (int u : graph.neighbors(comp[head])) {
                const auto ui = static_cast<std::size_t>(u);
                if (in_set[ui] != 0 && seen[ui] == 0) {
                    seen[ui] = 1;
                    comp.push_back(u);
                }
            }
        }
        std::sort(comp.begin(), comp.end());
        out.push_back(std::move(comp));
    }
    return out;
}

/// Colors of `mask` ordered by random key.
std::vector<Color> shuffled_colors(const CounterRng& rng, Purpose purpose, int v, std::uint32_t mask) {
    std::vector<std::pair<std::uint64_t, Color>> keyed;
    for (int c = 0; mask != 0; ++c, mask >>= 1) {
        if ((mask & 1U) != 0) {
            keyed.emplace_back(rng.color_key(purpose, static_cast<std::uint64_t>(v), 0, c), static_cast<Color>(c));
        }
    }
    std::sort(keyed.begin(), keyed.end());
    std::vector<Color> out;
    out.reserve(keyed.size());
    for (const auto& kc : keyed) {
        out.push_back(kc.second);
    }
    return out;
}

} // namespace

CompletionReport complete_remainder(ColoringState& state, const CounterRng& rng, long node_budget) {
    CompletionReport report;
    const Graph& graph = state.graph();
    std::vector<char> in_set(static_cast<std::size_t>(state.size()), 0);
    for (int v = 0; v < state.size(); ++v) {
        in_set[static_cast<std::size_t>(v)] = state.is_uncolored(v) ? 1 : 0;
    }
    std::map<long, long> histogram;
    for (const auto& comp : components_of(graph, in_set)) {
        ++report.components;
        const auto size = static_cast<long>(comp.size());
        ++histogram[size];
        report.max_component = std::max(report.max_component, size);
        std::vector<std::vector<Color>> lists;
        lists.reserve(comp.size());
        for (int v : comp) {
            lists.push_back(shuffled_colors(rng, Purpose::completion_color, v, state.available_palette(v)));
        }
        const auto solved = solve_list_coloring(graph, comp, lists, node_budget);
        if (solved.was_tree) {
            ++report.tree_components;
        }
        if (solved.success) {
            for (std::size_t i = 0; i < comp.size(); ++i) {
                state.set_color(comp[i], solved.colors[i]);
            }
            report.vertices_colored += size;
        } else {
            ++report.failures;
            report.failed_vertices += size;
            for (int v : comp) {
                state.set_color(v, kRed);
            }
        }
    }
    report.size_histogram.assign(histogram.begin(), histogram.end());
    return report;
}

TidyReport tidy_to_proper(ColoringState& state, const CounterRng& rng, long node_budget) {
    TidyReport report;
    if (state.uncolored_count() != 0) {
        throw PreconditionError("tidy-up requires every vertex to be colored");
    }
    const Graph& graph = state.graph();
    const auto n = static_cast<std::size_t>(state.size());
    const Color extra = state.extra_color();
    report.red_before = state.red_count();
    if (report.red_before == 0) {
        return report;
    }

    std::vector<char> erase(n, 0);
    for (int v = 0; v < state.size(); ++v) {
        if (state.color(v) == kRed) {
            erase[static_cast<std::size_t>(v)] = 1;
            for (int u : graph.neighbors(v)) {
                erase[static_cast<std::size_t>(u)] = 1;
            }
        }
    }
    std::vector<Color> previous(n, kUncolored);
    for (int v = 0; v < state.size(); ++v) {
        if (erase[static_cast<std::size_t>(v)] != 0) {
            previous[static_cast<std::size_t>(v)] = state.color(v);
            state.clear_color(v);
            ++report.erased;
        }
    }

    for (const auto& comp : components_of(graph, erase)) {
        ++report.components;
        std::vector<std::vector<Color>> lists;
        lists.reserve(comp.size());
        for (int v : comp) {
            // Colors still present on colored neighbors are excluded.
            std::uint32_t blocked = 0;
            for (int u : graph.neighbors(v)) {
                const Color cu = state.color(u);
                if (cu >= 0) {
                    blocked |= 1U << cu;
                }
            }
            std::vector<Color> list;
            const Color prev = previous[static_cast<std::size_t>(v)];
            if (prev == kRed) {
                list = shuffled_colors(rng, Purpose::tidy_color, v, state.palette_mask() & ~blocked);
            } else if ((blocked >> prev & 1U) == 0) {
                list.push_back(prev);
            }
            if (((blocked >> extra) & 1U) == 0 && std::find(list.begin(), list.end(), extra) == list.end()) {
                list.push_back(extra);
            }
            lists.push_back(std::move(list));
        }
        const auto solved = solve_list_coloring(graph, comp, lists, node_budget);
        if (solved.success) {
            for (std::size_t i = 0; i < comp.size(); ++i) {
                state.set_color(comp[i], solved.colors[i]);
            }
        } else {
            ++report.failures;
            for (int v : comp) {
                state.set_color(v, kRed);
            }
        }
    }
    state.unbuffered_reds().clear();
    report.extra_used = state.extra_count();
    report.red_after = state.red_count();
    return report;
}

std::vector<Violation> verify_proper(const ColoringState& state) {
    std::vector<Violation> out;
    for (const auto& [u, v] : state.graph().edges()) {
        const Color cu = state.color(u);
        if (cu != kUncolored && cu == state.color(v)) {
            out.push_back({u, v, cu});
        }
    }
    return out;
}

} // namespace treecolor
