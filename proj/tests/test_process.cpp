#include "doctest.h"

#include <cmath>
#include <memory>

#include "treecolor/coloring_state.hpp"
#include "treecolor/errors.hpp"
#include "treecolor/graph.hpp"
#include "treecolor/process.hpp"

using namespace treecolor;

namespace {

const PaletteConfig k43{4, 3};
const PaletteConfig k64{6, 4};

ColoringState fixture_state(const std::string& text, PaletteConfig cfg) {
    return state_from_fixture(parse_fixture(text), cfg);
}

ColoringState fresh(int n, PaletteConfig cfg, std::uint64_t seed) {
    return ColoringState(std::make_shared<const Graph>(gen_regular_graph(n, cfg.r, seed)), cfg);
}

std::vector<Color> colors_of(const ColoringState& s) {
    std::vector<Color> out(static_cast<std::size_t>(s.size()));
    for (int v = 0; v < s.size(); ++v) {
        out[static_cast<std::size_t>(v)] = s.color(v);
    }
    return out;
}

} // namespace

TEST_CASE("forced color: a vertex robbed down to one color takes it") {
    // w(0) - v(1) - u(2); w is colored 0, u activates with color 2.
    auto s = fixture_state("3 4\n0 1\n1 2\ncolor 0 0\n", k43);
    const auto rep = greedy_step_with(s, {{2, 2}}, CounterRng(1));
    CHECK(s.color(2) == 2);
    CHECK(s.color(1) == 1);
    CHECK(rep.colored_by_rule[1] == 1);
    CHECK(rep.colored_by_rule[2] == 1);
    CHECK(rep.new_red == 0);
    REQUIRE(rep.cascades.size() == 1);
    CHECK(rep.cascades[0].total_colored == 2);
}

TEST_CASE("two colored neighbors in one step turn a vertex red") {
    // a(0) - x(1) - b(2); a and b activate together.
    auto s = fixture_state("3 4\n0 1\n1 2\n", k43);
    const auto rep = greedy_step_with(s, {{0, 0}, {2, 1}}, CounterRng(1));
    CHECK(s.color(0) == 0);
    CHECK(s.color(2) == 1);
    CHECK(s.color(1) == kRed);
    CHECK(rep.colored_by_rule[3] == 1);
    CHECK(rep.new_red == 1);
}

TEST_CASE("adjacent simultaneous colorings both turn red") {
    auto s = fixture_state("2 4\n0 1\n", k43);
    const auto rep = greedy_step_with(s, {{0, 0}, {1, 1}}, CounterRng(1));
    CHECK(s.color(0) == kRed);
    CHECK(s.color(1) == kRed);
    CHECK(rep.colored_by_rule[4] == 2);
    CHECK(rep.new_red == 2);
}

TEST_CASE("activation preconditions") {
    auto s = fixture_state("3 4\n0 1\n1 2\ncolor 0 0\n", k43);
    CHECK_THROWS_AS(greedy_step_with(s, {{0, 1}}, CounterRng(1)), PreconditionError);
    CHECK_THROWS_AS(greedy_step_with(s, {{1, 0}}, CounterRng(1)), PreconditionError);
    CHECK_THROWS_AS(greedy_step_with(s, {{2, 1}, {2, 1}}, CounterRng(1)), PreconditionError);
}

TEST_CASE("epsilon 0 changes nothing") {
    auto s = fresh(400, k43, 1);
    const auto before = colors_of(s);
    const auto rep = greedy_step(s, standard_tuning(k43, 0.0), CounterRng(3));
    CHECK(rep.active == 0);
    CHECK(rep.new_red == 0);
    CHECK(colors_of(s) == before);
    CHECK(s.uncolored_count() == 400);
}

TEST_CASE("one activation on a fresh state colors exactly one vertex") {
    for (PaletteConfig cfg : {k43, k64}) {
        auto s = fresh(200, cfg, 2);
        const auto rep = greedy_step_with(s, {{17, 1}}, CounterRng(1));
        CHECK(s.uncolored_count() == 199);
        CHECK(rep.new_red == 0);
        REQUIRE(rep.cascades.size() == 1);
        CHECK(rep.cascades[0].total_colored == 1);
    }
}

TEST_CASE("invariants hold along a whole run") {
    for (PaletteConfig cfg : {k43, k64}) {
        auto s = fresh(3000, cfg, 4);
        Phase1Options opt;
        opt.full_checks = true;
        const auto tuning = standard_tuning(cfg, 0.05);
        const auto res = run_phase1(s, tuning, 200, CounterRng(9), opt);
        CHECK(res.reports.size() == 200);
        CHECK(res.distributions.size() == 201);
        CHECK_FALSE(s.invariant_violation().has_value());
        long previous = 3000;
        for (const auto& rep : res.reports) {
            CHECK(rep.uncolored_after <= previous);
            previous = rep.uncolored_after;
        }
    }
}

TEST_CASE("zero steps give an empty report list") {
    auto s = fresh(100, k43, 1);
    const auto res = run_phase1(s, standard_tuning(k43, 0.02), 0, CounterRng(1));
    CHECK(res.reports.empty());
    CHECK(res.distributions.size() == 1);
    CHECK_THROWS_AS(run_phase1(s, standard_tuning(k43, 0.02), -1, CounterRng(1)), ConfigurationError);
}

TEST_CASE("same seed, same run") {
    auto a = fresh(2000, k64, 8);
    auto b = fresh(2000, k64, 8);
    const auto tuning = standard_tuning(k64, 0.05);
    Phase1Options opt;
    opt.modified = true;
    run_phase1(a, tuning, 300, CounterRng(21), opt);
    run_phase1(b, tuning, 300, CounterRng(21), opt);
    CHECK(colors_of(a) == colors_of(b));
}

TEST_CASE("relabelling the palette relabels the output") {
    const std::vector<int> perm{2, 0, 3, 1};
    auto a = fresh(2000, k64, 6);
    auto b = fresh(2000, k64, 6);
    const auto tuning = standard_tuning(k64, 0.05);
    const CounterRng rng(33);
    Phase1Options opt;
    opt.modified = true;
    run_phase1(a, tuning, 1500, rng, opt);
    run_phase1(b, tuning, 1500, rng.relabeled(perm), opt);
    long palette = 0;
    for (int v = 0; v < a.size(); ++v) {
        const Color c = a.color(v);
        if (a.is_palette(c)) {
            ++palette;
            CHECK(b.color(v) == perm[static_cast<std::size_t>(c)]);
        } else {
            CHECK(b.color(v) == c);
        }
    }
    CHECK(palette > 200);
}

TEST_CASE("branches across an uncolored edge are independent on a tree") {
    // Root edge (0, 1) of a radius-4 ball in T_4. Conditioned on both ends
    // being uncolored, the colored counts on the two sides are uncorrelated.
    const auto graph = std::make_shared<const Graph>(make_tree_ball(4, 4));
    std::vector<int> side(static_cast<std::size_t>(graph->size()), 0);
    {
        // side 1: vertex 1 and everything below it; side 0: the rest.
        std::vector<int> stack{1};
        side[1] = 1;
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            for (int u : graph->neighbors(v)) {
                if (u != 0 && side[static_cast<std::size_t>(u)] == 0) {
                    side[static_cast<std::size_t>(u)] = 1;
                    stack.push_back(u);
                }
            }
        }
    }
    const auto tuning = standard_tuning(k43, 0.1);
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    long samples = 0;
    for (std::uint64_t seed = 1; samples < 10000; ++seed) {
        ColoringState s(graph, k43);
        const CounterRng rng(seed);
        for (int i = 0; i < 30; ++i) {
            greedy_step(s, tuning, rng);
        }
        if (!s.is_uncolored(0) || !s.is_uncolored(1)) {
            continue;
        }
        double x = 0, y = 0;
        for (int v = 0; v < s.size(); ++v) {
            if (!s.is_uncolored(v)) {
                (side[static_cast<std::size_t>(v)] ? y : x) += 1.0;
            }
        }
        sx += x;
        sy += y;
        sxx += x * x;
        syy += y * y;
        sxy += x * y;
        ++samples;
    }
    const double m = static_cast<double>(samples);
    const double cov = sxy / m - sx / m * sy / m;
    const double corr = cov / std::sqrt((sxx / m - sx * sx / m / m) * (syy / m - sy * sy / m / m));
    CHECK(std::abs(corr) <= 0.03);
}

TEST_CASE("isolated cascade on a fresh state") {
    auto s = fresh(500, k43, 3);
    const auto rec = trace_cascade(s, 10, CounterRng(1), 0);
    CHECK(rec.total_colored == 1);
    CHECK_FALSE(rec.collision);
    CHECK(s.uncolored_count() == 500);

    s.set_color(10, 0);
    CHECK_THROWS_AS(trace_cascade(s, 10, CounterRng(1), 0), PreconditionError);
}

TEST_CASE("isolated cascade forces a robbed neighbor") {
    // 0 - 1 - 2 with 2 colored 0: vertex 1 keeps {1, 2}, so the cascade from
    // 0 reaches it exactly when 0 draws 1 or 2.
    auto s = fixture_state("3 4\n0 1\n1 2\ncolor 2 0\n", k43);
    const int draws = 6000;
    int forced = 0;
    for (int k = 0; k < draws; ++k) {
        const auto rec = trace_cascade(s, 0, CounterRng(2), static_cast<std::uint64_t>(k));
        CHECK(rec.total_colored >= 1);
        CHECK(rec.total_colored <= 2);
        CHECK_FALSE(rec.collision);
        forced += rec.total_colored == 2 ? 1 : 0;
    }
    const double frac = static_cast<double>(forced) / draws;
    CHECK(std::abs(frac - 2.0 / 3.0) < 5.0 * std::sqrt(2.0 / 9.0 / draws));
}

TEST_CASE("buffer rounds without red vertices do nothing") {
    auto s = fresh(300, k64, 1);
    const auto rep = buffer_rounds(s, CounterRng(1));
    CHECK(rep.rounds == 0);
    CHECK(rep.vertices_colored == 0);
    CHECK(s.uncolored_count() == 300);
}

TEST_CASE("buffer around a single red vertex in a tree") {
    const auto graph = std::make_shared<const Graph>(make_tree_ball(6, 5));
    ColoringState s(graph, k64);
    s.set_color(0, kRed);
    const auto rep = buffer_rounds(s, CounterRng(5));
    CHECK(rep.budget_failures == 0);
    CHECK(rep.new_red == 0);
    // The uncolored 3-ball around the root: 6 + 30 + 150 vertices.
    CHECK(rep.vertices_colored == 186);
    CHECK(s.uncolored_count() == graph->size() - 187);
    CHECK(s.unbuffered_reds().empty());
    CHECK_FALSE(s.invariant_violation().has_value());
}
