#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace treecolor {

enum class GraphKind { random_regular, tree_ball, fixture };

std::string to_string(GraphKind kind);
GraphKind graph_kind_from_string(const std::string& s);

/// Undirected simple graph in compressed adjacency form.
class Graph {
public:
    Graph() = default;
    /// Builds from an edge list; rejects self-loops, parallel edges and
    /// out-of-range endpoints with ConfigurationError.
    Graph(int n, int r, GraphKind kind, const std::vector<std::pair<int, int>>& edges);

    int size() const { return n_; }
    int regularity() const { return r_; }
    GraphKind kind() const { return kind_; }

    std::span<const int> neighbors(int v) const {
        return {adjacency_.data() + offsets_[static_cast<std::size_t>(v)],
                adjacency_.data() + offsets_[static_cast<std::size_t>(v) + 1]};
    }
    int degree(int v) const {
        return offsets_[static_cast<std::size_t>(v) + 1] - offsets_[static_cast<std::size_t>(v)];
    }
    std::size_t edge_count() const { return adjacency_.size() / 2; }
    /// Each edge once, as (u, v) with u < v.
    std::vector<std::pair<int, int>> edges() const;

    /// Degree-1 leaves of a tree ball; empty for other kinds.
    const std::vector<int>& boundary() const { return boundary_; }
    bool is_boundary(int v) const { return !boundary_flag_.empty() && boundary_flag_[static_cast<std::size_t>(v)] != 0; }
    void set_boundary(std::vector<int> boundary);

private:
    int n_ = 0;
    int r_ = 0;
    GraphKind kind_ = GraphKind::fixture;
    std::vector<int> offsets_{0};
    std::vector<int> adjacency_;
    std::vector<int> boundary_;
    std::vector<std::uint8_t> boundary_flag_;
};

/// Simple r-regular graph on n vertices: a random configuration-model pairing
/// whose self-loops and parallel edges are removed by random double-edge
/// swaps. Deterministic given the seed. Throws ConfigurationError when n*r is
/// odd or n <= r, GenerationError when a bad edge survives 1000 swap attempts.
Graph gen_regular_graph(int n, int r, std::uint64_t seed);

/// Ball of the given radius in the r-regular tree, rooted at vertex 0.
/// Vertices at depth `radius` form the boundary and have degree 1.
Graph make_tree_ball(int r, int radius);

/// Graph fixture text: first line "n r", then "u v" per edge, then optional
/// "color v c" lines (c a palette index or "red"). Lines starting with '#' are
/// ignored.
struct Fixture {
    Graph graph;
    std::vector<std::pair<int, std::string>> colors;
};

/// Throws ParseError naming the line.
Fixture parse_fixture(const std::string& text);

} // namespace treecolor
