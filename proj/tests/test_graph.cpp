#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "treecolor/errors.hpp"
#include "treecolor/graph.hpp"

using namespace treecolor;

namespace {

long triangles(const Graph& g) {
    long count = 0;
    for (int u = 0; u < g.size(); ++u) {
        for (int v : g.neighbors(u)) {
            if (v <= u) {
                continue;
            }
            for (int w : g.neighbors(v)) {
                if (w <= v) {
                    continue;
                }
                const auto nu = g.neighbors(u);
                if (std::find(nu.begin(), nu.end(), w) != nu.end()) {
                    ++count;
                }
            }
        }
    }
    return count;
}

} // namespace

TEST_CASE("random regular graphs are simple and regular") {
    for (int r : {4, 6}) {
        const Graph g = gen_regular_graph(1000, r, 5);
        CHECK(g.size() == 1000);
        CHECK(g.edge_count() == static_cast<std::size_t>(1000 * r / 2));
        std::set<std::pair<int, int>> seen;
        for (int v = 0; v < g.size(); ++v) {
            CHECK(g.degree(v) == r);
        }
        for (const auto& e : g.edges()) {
            CHECK(e.first < e.second);
            CHECK(seen.insert(e).second);
        }
    }
}

TEST_CASE("generation is deterministic in the seed") {
    const auto a = gen_regular_graph(500, 4, 17).edges();
    const auto b = gen_regular_graph(500, 4, 17).edges();
    const auto c = gen_regular_graph(500, 4, 18).edges();
    CHECK(a == b);
    CHECK(a != c);
}

TEST_CASE("triangle counts match the configuration-model mean (r-1)^3/6") {
    for (int r : {4, 6}) {
        const int graphs = 20;
        long total = 0;
        for (int s = 0; s < graphs; ++s) {
            total += triangles(gen_regular_graph(3000, r, 100 + static_cast<std::uint64_t>(s)));
        }
        const double mean = static_cast<double>(total) / graphs;
        const double expected = (r - 1.0) * (r - 1.0) * (r - 1.0) / 6.0;
        // Poisson counts: five standard errors of the mean.
        CHECK(std::abs(mean - expected) < 5.0 * std::sqrt(expected / graphs));
    }
}

TEST_CASE("invalid regular graph requests") {
    CHECK_THROWS_AS(gen_regular_graph(999, 3, 1), ConfigurationError);
    CHECK_THROWS_AS(gen_regular_graph(4, 4, 1), ConfigurationError);
}

TEST_CASE("tree balls") {
    const Graph g = make_tree_ball(4, 3);
    // 1 + 4 + 12 + 36 vertices.
    CHECK(g.size() == 53);
    CHECK(g.edge_count() == 52);
    CHECK(g.boundary().size() == 36);
    for (int v = 0; v < g.size(); ++v) {
        CHECK(g.degree(v) == (g.is_boundary(v) ? 1 : 4));
    }
    CHECK_THROWS_AS(make_tree_ball(4, 0), ConfigurationError);
}

TEST_CASE("fixture parsing") {
    const Fixture fx = parse_fixture("# path\n3 2\n0 1\n1 2\ncolor 0 1\ncolor 2 red\n");
    CHECK(fx.graph.size() == 3);
    CHECK(fx.graph.edge_count() == 2);
    REQUIRE(fx.colors.size() == 2);
    CHECK(fx.colors[1] == std::pair<int, std::string>{2, "red"});

    CHECK_THROWS_AS(parse_fixture(""), ParseError);
    CHECK_THROWS_AS(parse_fixture("3 2\n0 x\n"), ParseError);
    CHECK_THROWS_AS(parse_fixture("3 2\n0 1 2\n"), ParseError);
    CHECK_THROWS_AS(parse_fixture("3 2\n0 0\n"), ParseError);
    CHECK_THROWS_AS(parse_fixture("3 2\n0 1\n1 0\n"), ParseError);
    CHECK_THROWS_AS(parse_fixture("3 2\ncolor 5 1\n"), ParseError);
    try {
        parse_fixture("3 2\n0 1\nbogus\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
}
