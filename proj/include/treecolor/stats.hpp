#pragma once

// Aggregation of run data and the statistical checks of the process against
// the type dynamics.

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "treecolor/certifier.hpp"
#include "treecolor/coloring_state.hpp"
#include "treecolor/completion.hpp"
#include "treecolor/process.hpp"
#include "treecolor/rng.hpp"
#include "treecolor/types.hpp"

namespace treecolor {

struct StepStats {
    long step = 0;
    double time = 0.0;
    double uncolored_frac = 0.0;
    double red_frac = 0.0;
    double extra_frac = 0.0;
    long active = 0;
    double mean_cascade = 0.0;
    int max_cascade = 0;
    int rounds = 0;
    TypeDistribution z;
};

struct RunStats {
    PaletteConfig cfg;
    TuningParams tuning;
    long n = 0;
    std::uint64_t graph_seed = 0;
    std::uint64_t seed = 0;
    bool modified = false;
    /// Row 0 is the state before the first step.
    std::vector<StepStats> steps;
    std::map<int, long> cascade_histogram;
    /// Rounds used per step -> number of steps.
    std::map<int, long> rounds_histogram;
    BufferReport buffer;

    // Final fields, filled once the run is finished.
    std::map<long, long> component_histogram;
    long violations = 0;
    long completion_failures = 0;
    long tidy_failures = 0;
    double final_red_frac = 0.0;
    double final_extra_frac = 0.0;
    /// Red fraction at the end of phase 1, before completion and tidy-up.
    double phase1_red_frac = 0.0;
};

/// Per-step table from a phase-1 run on n vertices. The initial counts are
/// those of the state before the first step; a negative uncolored count
/// stands for n.
RunStats make_run_stats(const Phase1Result& result, const PaletteConfig& cfg, const TuningParams& tuning, long n,
                        long initial_uncolored = -1, long initial_red = 0, long initial_extra = 0);

/// Total-variation distance between two vectors on the same type space.
double tv_distance(const TypeVector& a, const TypeVector& b);

/// Sup over steps with time <= R of the max-norm distance between the
/// empirical distribution and the certified trajectory (linearly
/// interpolated). Throws ConfigurationError when the stats were produced
/// under another (r, p) or other weights, when their times are not
/// step * epsilon, or when the certificate records a positive epsilon that
/// differs from the run's.
double trajectory_distance(const RunStats& stats, const Certificate& cert);

/// Mean of the per-seed distances.
double mean_trajectory_distance(const std::vector<RunStats>& runs, const Certificate& cert);

struct TailFit {
    long samples = 0;
    double mean = 0.0;
    /// Slope of log P(size >= k) against k; absent when the support has a
    /// single point.
    std::optional<double> slope;
    double decay_rate = 0.0;
    double residual = 0.0;
    bool degenerate = false;
};

/// Weighted least-squares fit (weights = counts at each size) of the log
/// complementary CDF. Throws InsufficientDataError below 100 samples.
TailFit cascade_tail_fit(const std::map<int, long>& histogram);

struct RedScalingGroup {
    double epsilon = 0.0;
    double mean_red = 0.0;
    long seeds = 0;
};

struct RedScaling {
    std::vector<RedScalingGroup> groups;
    /// Log-log regression of mean red fraction against epsilon.
    std::optional<double> slope;
    double intercept = 0.0;
    /// red(epsilon/2) / red(epsilon) for each pair of groups with epsilon
    /// ratio 2.
    std::vector<std::pair<double, double>> halving_ratios;
    bool degenerate = false;
};

/// Throws InsufficientDataError unless there are >= 3 distinct epsilon
/// values with >= 3 results each.
RedScaling red_scaling(const std::vector<std::pair<double, double>>& results);

struct NeighborLaw {
    TypeVector empirical;
    TypeVector q;
    double tv = 0.0;
    long samples = 0;
};

/// Repeatedly picks a uniform uncolored vertex with an uncolored neighbor,
/// then a uniform uncolored neighbor, and records the neighbor's type.
/// Throws InsufficientDataError when no such pair exists.
NeighborLaw neighbor_type_law(const ColoringState& state, long samples, const CounterRng& rng);

struct ComponentStats {
    long count = 0;
    double mean_size = 0.0;
    long max_size = 0;
    std::map<long, long> histogram;
    /// Mean over directed uncolored edges (u, v) of the number of vertices
    /// on v's side of the edge, computed as sum k(k-1) / sum 2(k-1); exact for
    /// tree components.
    double mean_branch_size = 0.0;
};

/// Connected components of the uncolored vertices.
ComponentStats component_stats(const ColoringState& state);

struct CascadeLaw {
    long samples = 0;
    double mean_size = 0.0;
    /// Mean of the closed-form expected size over the sampled roots.
    double closed_form_mean = 0.0;
    std::map<int, long> histogram;
    long collisions = 0;
    /// Outcome law of a branch at the root: colored in generation 1 with a
    /// given type, or not colored ("none").
    TypeVector gen1_empirical;
    TypeVector gen1_expected;
    double none_empirical = 0.0;
    double none_expected = 0.0;
    double gen1_tv = 0.0;
};

/// Traces isolated cascades from `samples` uniform uncolored non-boundary
/// roots and compares them with the branching-process predictions at the
/// empirical distribution.
CascadeLaw cascade_law(const ColoringState& state, long samples, const CounterRng& rng);

} // namespace treecolor
