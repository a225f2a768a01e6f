#include "treecolor/list_coloring.hpp"

#include <algorithm>
#include <bit>
#include <unordered_map>

namespace treecolor {

namespace {

struct LocalGraph {
    std::vector<std::vector<int>> adj;
    std::size_t edges = 0;
};

LocalGraph localize(const Graph& graph, std::span<const int> vertices) {
    std::unordered_map<int, int> local;
    local.reserve(vertices.size() * 2);
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        local.emplace(vertices[i], static_cast<int>(i));
    }
    LocalGraph g;
    g.adj.resize(vertices.size());
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        for (int u : graph.neighbors(vertices[i])) {
            const auto it = local.find(u);
            if (it != local.end()) {
                g.adj[i].push_back(it->second);
            }
        }
        g.edges += g.adj[i].size();
    }
    g.edges /= 2;
    return g;
}

bool connected(const LocalGraph& g) {
    if (g.adj.empty()) {
        return true;
    }
    std::vector<char> seen(g.adj.size(), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int u : g.adj[static_cast<std::size_t>(v)]) {
            if (!seen[static_cast<std::size_t>(u)]) {
                seen[static_cast<std::size_t>(u)] = 1;
                ++count;
                stack.push_back(u);
            }
        }
    }
    return count == g.adj.size();
}

// First candidate not used by an already colored neighbor.
Color first_free(const std::vector<Color>& candidates, const std::vector<int>& nbrs, const std::vector<Color>& colors) {
    for (Color c : candidates) {
        bool used = false;
        for (int u : nbrs) {
            if (colors[static_cast<std::size_t>(u)] == c) {
                used = true;
                break;
            }
        }
        if (!used) {
            return c;
        }
    }
    return kUncolored;
}

bool color_tree(const LocalGraph& g, const std::vector<std::vector<Color>>& candidates, std::vector<Color>& colors) {
    std::vector<int> order{0};
    std::vector<char> seen(g.adj.size(), 0);
    seen[0] = 1;
    for (std::size_t head = 0; head < order.size(); ++head) {
        const int v = order[head];
        const Color c = first_free(candidates[static_cast<std::size_t>(v)], g.adj[static_cast<std::size_t>(v)], colors);
        if (c == kUncolored) {
            return false;
        }
        colors[static_cast<std::size_t>(v)] = c;
        for (int u : g.adj[static_cast<std::size_t>(v)]) {
            if (!seen[static_cast<std::size_t>(u)]) {
                seen[static_cast<std::size_t>(u)] = 1;
                order.push_back(u);
            }
        }
    }
    return true;
}

class CoreSearch {
public:
    CoreSearch(const LocalGraph& g, const std::vector<std::vector<Color>>& candidates, const std::vector<int>& core,
               long budget)
        : g_(g), candidates_(candidates), core_(core), budget_(budget) {
        in_core_.assign(g.adj.size(), 0);
        domain_.assign(g.adj.size(), 0);
        for (int v : core_) {
            in_core_[static_cast<std::size_t>(v)] = 1;
            for (Color c : candidates_[static_cast<std::size_t>(v)]) {
                domain_[static_cast<std::size_t>(v)] |= 1ULL << (c + 2);
            }
        }
    }

    bool solve(std::vector<Color>& colors) {
        struct Frame {
            int v;
            std::size_t next = 0;
            std::vector<int> pruned;
            std::uint64_t bit = 0;
        };
        std::vector<Frame> stack;
        auto open = [&]() {
            const int v = pick(colors);
            stack.push_back(Frame{v, 0, {}, 0});
        };
        if (core_.empty()) {
            return true;
        }
        open();
        while (!stack.empty()) {
            Frame& f = stack.back();
            const auto vi = static_cast<std::size_t>(f.v);
            // Undo the previous choice of this frame.
            if (f.bit != 0) {
                for (int u : f.pruned) {
                    domain_[static_cast<std::size_t>(u)] |= f.bit;
                }
                f.pruned.clear();
                f.bit = 0;
                colors[vi] = kUncolored;
            }
            const auto& cands = candidates_[vi];
            bool advanced = false;
            while (f.next < cands.size()) {
                const Color c = cands[f.next++];
                const std::uint64_t bit = 1ULL << (c + 2);
                if (!(domain_[vi] & bit)) {
                    continue;
                }
                if (++nodes_ > budget_ || work_ > 100 * budget_) {
                    exhausted_ = true;
                    return false;
                }
                colors[vi] = c;
                f.bit = bit;
                bool wiped = false;
                for (int u : g_.adj[vi]) {
                    const auto ui = static_cast<std::size_t>(u);
                    if (in_core_[ui] && colors[ui] == kUncolored && (domain_[ui] & bit)) {
                        domain_[ui] &= ~bit;
                        f.pruned.push_back(u);
                        wiped = wiped || domain_[ui] == 0;
                    }
                }
                if (wiped) {
                    for (int u : f.pruned) {
                        domain_[static_cast<std::size_t>(u)] |= bit;
                    }
                    f.pruned.clear();
                    f.bit = 0;
                    colors[vi] = kUncolored;
                    continue;
                }
                advanced = true;
                break;
            }
            if (!advanced) {
                stack.pop_back();
                continue;
            }
            if (stack.size() == core_.size()) {
                return true;
            }
            open();
        }
        return false;
    }
    long nodes() const { return nodes_; }
    bool exhausted() const { return exhausted_; }

private:
    int pick(const std::vector<Color>& colors) {
        int best = -1;
        int best_size = 1 << 30;
        int best_degree = -1;
        work_ += static_cast<long>(core_.size());
        for (int v : core_) {
            if (colors[static_cast<std::size_t>(v)] != kUncolored) {
                continue;
            }
            const int size = std::popcount(domain_[static_cast<std::size_t>(v)]);
            int degree = 0;
            for (int u : g_.adj[static_cast<std::size_t>(v)]) {
                degree += in_core_[static_cast<std::size_t>(u)] && colors[static_cast<std::size_t>(u)] == kUncolored;
            }
            if (size < best_size || (size == best_size && degree > best_degree)) {
                best = v;
                best_size = size;
                best_degree = degree;
            }
        }
        return best;
    }

    const LocalGraph& g_;
    const std::vector<std::vector<Color>>& candidates_;
    const std::vector<int>& core_;
    long budget_;
    long nodes_ = 0;
    /// Vertices scanned when choosing the next vertex; bounded as well.
    long work_ = 0;
    bool exhausted_ = false;
    std::vector<char> in_core_;
    std::vector<std::uint64_t> domain_;
};

} // namespace

ListColoringResult solve_list_coloring(const Graph& graph, std::span<const int> vertices,
                                       const std::vector<std::vector<Color>>& candidates, long node_budget) {
    ListColoringResult result;
    result.colors.assign(vertices.size(), kUncolored);
    if (vertices.empty()) {
        result.success = true;
        return result;
    }
    const LocalGraph g = localize(graph, vertices);
    if (g.edges + 1 == vertices.size() && connected(g)) {
        result.was_tree = true;
        if (color_tree(g, candidates, result.colors)) {
            result.success = true;
            return result;
        }
        result.colors.assign(vertices.size(), kUncolored);
    }

    // Peel vertices with remaining degree < list size.
    const std::size_t k = vertices.size();
    std::vector<int> degree(k);
    std::vector<char> removed(k, 0);
    std::vector<int> peeled;
    std::vector<int> queue;
    for (std::size_t i = 0; i < k; ++i) {
        degree[i] = static_cast<int>(g.adj[i].size());
        if (degree[i] < static_cast<int>(candidates[i].size())) {
            queue.push_back(static_cast<int>(i));
            removed[i] = 1;
        }
    }
    while (!queue.empty()) {
        const int v = queue.back();
        queue.pop_back();
        peeled.push_back(v);
        for (int u : g.adj[static_cast<std::size_t>(v)]) {
            const auto ui = static_cast<std::size_t>(u);
            if (!removed[ui] && --degree[ui] < static_cast<int>(candidates[ui].size())) {
                removed[ui] = 1;
                queue.push_back(u);
            }
        }
    }
    std::vector<int> core;
    for (std::size_t i = 0; i < k; ++i) {
        if (!removed[i]) {
            core.push_back(static_cast<int>(i));
        }
    }

    CoreSearch search(g, candidates, core, node_budget);
    const bool core_ok = search.solve(result.colors);
    result.nodes = search.nodes();
    result.budget_exhausted = search.exhausted();
    if (!core_ok) {
        result.colors.assign(k, kUncolored);
        return result;
    }
    for (auto it = peeled.rbegin(); it != peeled.rend(); ++it) {
        const auto vi = static_cast<std::size_t>(*it);
        const Color c = first_free(candidates[vi], g.adj[vi], result.colors);
        if (c == kUncolored) {
            result.colors.assign(k, kUncolored);
            return result;
        }
        result.colors[vi] = c;
    }
    result.success = true;
    return result;
}

} // namespace treecolor
