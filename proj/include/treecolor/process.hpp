#pragma once

// The greedy coloring process: random activation, forced cascades, red error
// marking, and the buffered variant that fills in the distance-3
// neighborhood of every new red vertex.

#include <array>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "treecolor/coloring_state.hpp"
#include "treecolor/rng.hpp"
#include "treecolor/types.hpp"

namespace treecolor {

struct CascadeRecord {
    int root = -1;
    VertexType root_type;
    /// generation_counts[k][i]: vertices of (start-of-step) type index i
    /// colored at distance k from the root.
    std::vector<std::vector<int>> generation_counts;
    /// Palette-colored vertices, root included.
    int total_colored = 0;
    /// The cascade ran into another one (or into itself through a cycle).
    bool collision = false;
    /// Started by a buffer-round component rather than by an activation.
    bool from_buffer = false;
};

struct BufferReport {
    int rounds = 0;
    long components = 0;
    long vertices_colored = 0;
    long new_red = 0;
    long budget_failures = 0;
    /// activity_by_round[j]: vertices colored or made red during buffer round
    /// j (index 0 unused).
    std::vector<long> activity_by_round;

    void merge(const BufferReport& other);
};

struct StepReport {
    long step = 0;
    long active = 0;
    /// colored_by_rule[k] for k = 1..4: activation, forcing, two step-colored
    /// neighbors (red), adjacent simultaneous pair (red).
    std::array<long, 5> colored_by_rule{};
    long new_red = 0;
    int rounds = 0;
    /// Activation cascades: count, colored vertices in total, largest.
    long cascade_count = 0;
    long cascade_total = 0;
    int max_cascade = 0;
    std::vector<CascadeRecord> cascades;
    BufferReport buffer;
    /// Counts at the end of the step.
    long uncolored_after = 0;
    long red_after = 0;
    long extra_after = 0;
};

/// One macro-step: snapshot types, activate each uncolored vertex with
/// probability epsilon * weight(type), then run rounds to a fixpoint. Within
/// a round, rule 3 (>= 2 neighbors colored this step: red) is applied first,
/// then rule 2 (one available color left: take it) schedules vertices, then
/// rule 4 turns every adjacent pair of scheduled vertices red, and the
/// survivors commit together. With `modified` set the buffer rounds follow
/// within the same step. Advances the state's step index.
/// Throws InternalConsistencyError when an invariant fails at exit.
StepReport greedy_step(ColoringState& state, const TuningParams& tuning, const CounterRng& rng,
                       bool modified = false);

/// greedy_step with a prescribed activation set instead of sampled
/// activations: every listed vertex is active and starts with the given
/// color, which must be available to it. Used by hand-built rule fixtures.
StepReport greedy_step_with(ColoringState& state, const std::vector<std::pair<int, Color>>& activations,
                            const CounterRng& rng, bool modified = false);

/// Until no red vertex has an uncolored vertex within distance 3: list-color
/// each component of uncolored vertices within distance 3 of an unbuffered
/// red vertex, then run the forcing/red rules from the component boundaries.
/// Components that cannot be colored within the node budget turn red.
BufferReport buffer_rounds(ColoringState& state, const CounterRng& rng);

/// Cascade from v alone on an untouched copy of the state: v takes a uniform
/// available color, then every vertex left with one available color takes
/// it, generation by generation. Vertices reached twice (possible only along
/// cycles) turn red and set the collision flag. `draw` selects an independent
/// random draw. Throws PreconditionError if v is colored.
CascadeRecord trace_cascade(const ColoringState& state, int v, const CounterRng& rng, std::uint64_t draw);

struct Phase1Options {
    bool modified = false;
    /// Keep full cascade records in the step reports.
    bool keep_cascades = false;
    /// Run the O(n) whole-state invariant check after every step (the
    /// per-step check is local to the vertices the step touched).
    bool full_checks = false;
};

struct Phase1Result {
    std::vector<StepReport> reports;
    /// Empirical distribution before the first step and after each step.
    std::vector<TypeDistribution> distributions;
    /// Colored vertices per cascade, over the whole run.
    std::map<int, long> cascade_sizes;
    BufferReport buffer;
};

/// Applies greedy_step `steps` times.
Phase1Result run_phase1(ColoringState& state, const TuningParams& tuning, long steps, const CounterRng& rng,
                        const Phase1Options& options = {});

} // namespace treecolor
