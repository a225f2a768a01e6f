#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "treecolor/graph.hpp"
#include "treecolor/types.hpp"

namespace treecolor {

using Color = std::int8_t;

inline constexpr Color kUncolored = -1;
inline constexpr Color kRed = -2;

/// Set of vertex ids with O(1) clearing: membership is mark[v] == stamp.
struct StampSet {
    std::vector<std::uint32_t> mark;
    std::uint32_t stamp = 1;

    void resize(std::size_t n) {
        mark.assign(n, 0);
        stamp = 1;
    }
    void clear() {
        if (++stamp == 0) {
            std::fill(mark.begin(), mark.end(), 0U);
            stamp = 1;
        }
    }
    bool contains(int v) const { return mark[static_cast<std::size_t>(v)] == stamp; }
    /// True if v was not yet a member.
    bool insert(int v) {
        auto& m = mark[static_cast<std::size_t>(v)];
        if (m == stamp) {
            return false;
        }
        m = stamp;
        return true;
    }
};

/// Per-step bookkeeping used by the process engine. Entries are reset through
/// the touched list at the start of each step.
struct StepScratch {
    /// Neighbors colored (palette or red) during the current step.
    std::vector<std::uint8_t> step_count;
    /// Cascade record index of vertices colored during the current step.
    std::vector<int> label;
    /// Label of the first step-colored neighbor, used when colorings from a
    /// single source are counted once.
    std::vector<int> source;
    /// Type index at the start of the step; -1 untouched, -2 outside T.
    std::vector<int> start_type;
    std::vector<int> touched;
    StampSet candidates;
    StampSet pending;
    StampSet region;
    StampSet visited;
    /// Cached uncolored vertices, compacted once per step.
    std::vector<int> remaining;
    bool remaining_valid = false;

    void ensure(std::size_t n);
};

/// Partial coloring of a graph with palette {0..p-1}, the error color red and
/// the extra color p. Per-vertex uncolored degree and seen-color counts are
/// kept up to date by set_color / clear_color.
class ColoringState {
public:
    ColoringState(std::shared_ptr<const Graph> graph, PaletteConfig cfg);

    const Graph& graph() const { return *graph_; }
    const std::shared_ptr<const Graph>& graph_ptr() const { return graph_; }
    const PaletteConfig& config() const { return cfg_; }
    int size() const { return graph_->size(); }
    Color extra_color() const { return static_cast<Color>(cfg_.p); }

    Color color(int v) const { return color_[static_cast<std::size_t>(v)]; }
    bool is_uncolored(int v) const { return color(v) == kUncolored; }
    bool is_palette(Color c) const { return c >= 0 && c < cfg_.p; }

    /// Bitmask of palette colors no neighbor uses.
    std::uint32_t available_palette(int v) const { return avail_[static_cast<std::size_t>(v)] & palette_mask_; }
    int available_count(int v) const { return std::popcount(available_palette(v)); }
    bool sees_extra(int v) const { return (avail_[static_cast<std::size_t>(v)] >> cfg_.p & 1U) == 0; }
    int uncolored_degree(int v) const { return uncolored_deg_[static_cast<std::size_t>(v)]; }
    std::uint32_t palette_mask() const { return palette_mask_; }

    /// Colors an uncolored vertex. c is a palette color, the extra color or red.
    void set_color(int v, Color c);
    /// Uncolors a colored vertex.
    void clear_color(int v);

    long uncolored_count() const { return uncolored_; }
    long red_count() const { return red_; }
    long extra_count() const { return extra_; }
    long palette_count() const { return size() - uncolored_ - red_ - extra_; }

    /// Uncolored vertices in increasing order.
    std::vector<int> uncolored_vertices() const;

    /// Red vertices whose distance-3 neighborhood has not been filled in yet.
    std::vector<int>& unbuffered_reds() { return unbuffered_reds_; }

    long step() const { return step_; }
    void advance_step() { ++step_; }

    /// Counts/denominator per type over uncolored non-boundary vertices, where
    /// the denominator counts non-boundary vertices.
    TypeDistribution empirical_distribution() const;

    StepScratch& scratch() const { return scratch_; }

    /// First violated invariant, if any: the list invariant (every uncolored
    /// vertex has >= 2 available palette colors), properness among palette
    /// and extra colors, conservation of counts, and consistency of the
    /// cached degree/mask data.
    std::optional<std::string> invariant_violation() const;

private:
    std::shared_ptr<const Graph> graph_;
    PaletteConfig cfg_;
    std::uint32_t palette_mask_;
    std::vector<Color> color_;
    std::vector<std::uint8_t> uncolored_deg_;
    /// n x (p+1) counts of neighbors per color (palette and extra).
    std::vector<std::uint8_t> seen_;
    /// Bit c set when no neighbor has color c (c <= p).
    std::vector<std::uint16_t> avail_;
    long uncolored_ = 0;
    long red_ = 0;
    long extra_ = 0;
    long step_ = 0;
    std::vector<int> unbuffered_reds_;
    mutable StepScratch scratch_;
};

/// Type of an uncolored vertex; nullopt marks a colored vertex. Red neighbors
/// lower d but never c.
std::optional<VertexType> vertex_type_of(const ColoringState& state, int v);

/// Applies fixture color presets ("red" or a palette index).
ColoringState state_from_fixture(const Fixture& fixture, PaletteConfig cfg);

} // namespace treecolor
