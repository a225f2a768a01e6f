#include "treecolor/graph.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <unordered_map>

#include "treecolor/errors.hpp"

namespace treecolor {

std::string to_string(GraphKind kind) {
    switch (kind) {
    case GraphKind::random_regular:
        return "random_regular";
    case GraphKind::tree_ball:
        return "tree_ball";
    case GraphKind::fixture:
        return "fixture";
    }
    return "fixture";
}

GraphKind graph_kind_from_string(const std::string& s) {
    if (s == "random_regular") {
        return GraphKind::random_regular;
    }
    if (s == "tree_ball") {
        return GraphKind::tree_ball;
    }
    if (s == "fixture") {
        return GraphKind::fixture;
    }
    throw ConfigurationError("unknown graph kind '" + s + "'");
}

Graph::Graph(int n, int r, GraphKind kind, const std::vector<std::pair<int, int>>& edges)
    : n_(n), r_(r), kind_(kind) {
    if (n < 0) {
        throw ConfigurationError("vertex count must be nonnegative");
    }
    std::vector<std::vector<int>> lists(static_cast<std::size_t>(n));
    for (const auto& [u, v] : edges) {
        if (u < 0 || v < 0 || u >= n || v >= n) {
            throw ConfigurationError("edge (" + std::to_string(u) + "," + std::to_string(v) + ") is out of range");
        }
        if (u == v) {
            throw ConfigurationError("self-loop at vertex " + std::to_string(u));
        }
        lists[static_cast<std::size_t>(u)].push_back(v);
        lists[static_cast<std::size_t>(v)].push_back(u);
    }
    offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
    for (int v = 0; v < n; ++v) {
        auto& l = lists[static_cast<std::size_t>(v)];
        std::sort(l.begin(), l.end());
        if (std::adjacent_find(l.begin(), l.end()) != l.end()) {
            throw ConfigurationError("parallel edge at vertex " + std::to_string(v));
        }
        offsets_[static_cast<std::size_t>(v) + 1] = offsets_[static_cast<std::size_t>(v)] + static_cast<int>(l.size());
    }
    adjacency_.reserve(static_cast<std::size_t>(offsets_.back()));
    for (const auto& l : lists) {
        adjacency_.insert(adjacency_.end(), l.begin(), l.end());
    }
}

std::vector<std::pair<int, int>> Graph::edges() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(edge_count());
    for (int u = 0; u < n_; ++u) {
        for (int v : neighbors(u)) {
            if (u < v) {
                out.emplace_back(u, v);
            }
        }
    }
    return out;
}

void Graph::set_boundary(std::vector<int> boundary) {
    boundary_ = std::move(boundary);
    boundary_flag_.assign(static_cast<std::size_t>(n_), 0);
    for (int v : boundary_) {
        boundary_flag_[static_cast<std::size_t>(v)] = 1;
    }
}

namespace {

std::uint64_t edge_key(int u, int v) {
    if (u > v) {
        std::swap(u, v);
    }
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) | static_cast<std::uint32_t>(v);
}

class EdgeMultiset {
public:
    void add(int u, int v) { ++counts_[edge_key(u, v)]; }
    void remove(int u, int v) {
        auto it = counts_.find(edge_key(u, v));
        if (--it->second == 0) {
            counts_.erase(it);
        }
    }
    int count(int u, int v) const {
        const auto it = counts_.find(edge_key(u, v));
        return it == counts_.end() ? 0 : it->second;
    }

private:
    std::unordered_map<std::uint64_t, int> counts_;
};

} // namespace

Graph gen_regular_graph(int n, int r, std::uint64_t seed) {
    if (r < 1 || n <= r) {
        throw ConfigurationError("random regular graph needs n > r >= 1");
    }
    if ((static_cast<long long>(n) * r) % 2 != 0) {
        throw ConfigurationError("n * r must be even (got n=" + std::to_string(n) + ", r=" + std::to_string(r) + ")");
    }
    std::mt19937_64 rng(seed);
    std::vector<int> stubs;
    stubs.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(r));
    for (int v = 0; v < n; ++v) {
        for (int k = 0; k < r; ++k) {
            stubs.push_back(v);
        }
    }
    std::shuffle(stubs.begin(), stubs.end(), rng);

    std::vector<std::pair<int, int>> edges;
    edges.reserve(stubs.size() / 2);
    EdgeMultiset multiset;
    for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
        edges.emplace_back(stubs[i], stubs[i + 1]);
        multiset.add(stubs[i], stubs[i + 1]);
    }

    const auto is_bad = [&](std::size_t e) {
        const auto [a, b] = edges[e];
        return a == b || multiset.count(a, b) > 1;
    };
    std::uniform_int_distribution<std::size_t> pick(0, edges.size() - 1);
    std::bernoulli_distribution coin(0.5);
    for (std::size_t e = 0; e < edges.size(); ++e) {
        int attempts = 0;
        while (is_bad(e)) {
            if (++attempts > 1000) {
                throw GenerationError("could not remove a self-loop or parallel edge within 1000 swap attempts");
            }
            const std::size_t f = pick(rng);
            if (f == e) {
                continue;
            }
            auto [a, b] = edges[e];
            auto [c, d] = edges[f];
            if (coin(rng)) {
                std::swap(c, d);
            }
            // (a,b),(c,d) -> (a,c),(b,d)
            if (a == c || b == d) {
                continue;
            }
            const bool dup_ac = multiset.count(a, c) > 0;
            const bool dup_bd = multiset.count(b, d) > 0 || edge_key(a, c) == edge_key(b, d);
            if (dup_ac || dup_bd) {
                continue;
            }
            multiset.remove(a, b);
            multiset.remove(c, d);
            multiset.add(a, c);
            multiset.add(b, d);
            edges[e] = {a, c};
            edges[f] = {b, d};
        }
    }
    // Swaps can only remove badness from later edges or leave it; re-check.
    for (std::size_t e = 0; e < edges.size(); ++e) {
        if (is_bad(e)) {
            throw GenerationError("switch repair left a self-loop or parallel edge");
        }
    }
    return Graph(n, r, GraphKind::random_regular, edges);
}

Graph make_tree_ball(int r, int radius) {
    if (r < 2 || radius < 1) {
        throw ConfigurationError("tree ball needs r >= 2 and radius >= 1");
    }
    std::vector<std::pair<int, int>> edges;
    std::vector<int> frontier{0};
    int next = 1;
    for (int depth = 0; depth < radius; ++depth) {
        std::vector<int> children;
        for (int v : frontier) {
            const int count = depth == 0 ? r : r - 1;
            for (int k = 0; k < count; ++k) {
                edges.emplace_back(v, next);
                children.push_back(next++);
            }
        }
        frontier = std::move(children);
    }
    Graph g(next, r, GraphKind::tree_ball, edges);
    g.set_boundary(frontier);
    return g;
}

Fixture parse_fixture(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    int n = -1;
    int r = -1;
    std::vector<std::pair<int, int>> edges;
    Fixture fx;
    const auto fail = [&](const std::string& what) {
        throw ParseError("fixture line " + std::to_string(line_no) + ": " + what);
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') {
            continue;
        }
        std::istringstream fields(line);
        if (n < 0) {
            if (!(fields >> n >> r) || n < 0 || r < 1) {
                fail("expected header 'n r'");
            }
            continue;
        }
        std::string first;
        fields >> first;
        if (first == "color") {
            int v = -1;
            std::string c;
            if (!(fields >> v >> c) || v < 0 || v >= n) {
                fail("expected 'color v c' with 0 <= v < n");
            }
            fx.colors.emplace_back(v, c);
        } else {
            int u = -1;
            int v = -1;
            try {
                std::size_t used = 0;
                u = std::stoi(first, &used);
                if (used != first.size()) {
                    fail("malformed vertex '" + first + "'");
                }
            } catch (const std::logic_error&) {
                fail("malformed vertex '" + first + "'");
            }
            if (!(fields >> v)) {
                fail("expected edge 'u v'");
            }
            edges.emplace_back(u, v);
        }
        std::string rest;
        if (fields >> rest) {
            fail("unexpected trailing token '" + rest + "'");
        }
    }
    if (n < 0) {
        throw ParseError("fixture is empty (missing header 'n r')");
    }
    try {
        fx.graph = Graph(n, r, GraphKind::fixture, edges);
    } catch (const ConfigurationError& e) {
        throw ParseError(std::string("fixture edges: ") + e.what());
    }
    return fx;
}

} // namespace treecolor
