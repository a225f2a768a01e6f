#include "treecolor/coloring_state.hpp"

#include <algorithm>
#include <sstream>

#include "treecolor/errors.hpp"

namespace treecolor {

void StepScratch::ensure(std::size_t n) {
    if (step_count.size() != n) {
        step_count.assign(n, 0);
        label.assign(n, -1);
        source.assign(n, -1);
        start_type.assign(n, -1);
        candidates.resize(n);
        pending.resize(n);
        region.resize(n);
        visited.resize(n);
        touched.clear();
        remaining_valid = false;
    }
}

ColoringState::ColoringState(std::shared_ptr<const Graph> graph, PaletteConfig cfg)
    : graph_(std::move(graph)), cfg_(cfg), palette_mask_((1U << cfg.p) - 1U) {
    validate(cfg_);
    const auto n = static_cast<std::size_t>(graph_->size());
    for (int v = 0; v < graph_->size(); ++v) {
        if (graph_->degree(v) > cfg_.r) {
            throw ConfigurationError("vertex " + std::to_string(v) + " has degree above r");
        }
    }
    color_.assign(n, kUncolored);
    uncolored_deg_.resize(n);
    for (int v = 0; v < graph_->size(); ++v) {
        uncolored_deg_[static_cast<std::size_t>(v)] = static_cast<std::uint8_t>(graph_->degree(v));
    }
    seen_.assign(n * static_cast<std::size_t>(cfg_.p + 1), 0);
    avail_.assign(n, static_cast<std::uint16_t>((1U << (cfg_.p + 1)) - 1U));
    uncolored_ = graph_->size();
}

void ColoringState::set_color(int v, Color c) {
    const auto vi = static_cast<std::size_t>(v);
    if (color_[vi] != kUncolored) {
        throw PreconditionError("vertex " + std::to_string(v) + " is already colored");
    }
    if (c != kRed && (c < 0 || c > cfg_.p)) {
        throw PreconditionError("color " + std::to_string(c) + " is outside the palette");
    }
    color_[vi] = c;
    --uncolored_;
    if (c == kRed) {
        ++red_;
        unbuffered_reds_.push_back(v);
    } else if (c == extra_color()) {
        ++extra_;
    }
    const auto stride = static_cast<std::size_t>(cfg_.p + 1);
    for (int u : graph_->neighbors(v)) {
        const auto ui = static_cast<std::size_t>(u);
        --uncolored_deg_[ui];
        if (c >= 0) {
            if (seen_[ui * stride + static_cast<std::size_t>(c)]++ == 0) {
                avail_[ui] = static_cast<std::uint16_t>(avail_[ui] & ~(1U << c));
            }
        }
    }
}

void ColoringState::clear_color(int v) {
    const auto vi = static_cast<std::size_t>(v);
    const Color c = color_[vi];
    if (c == kUncolored) {
        throw PreconditionError("vertex " + std::to_string(v) + " is already uncolored");
    }
    color_[vi] = kUncolored;
    ++uncolored_;
    scratch_.remaining_valid = false;
    if (c == kRed) {
        --red_;
    } else if (c == extra_color()) {
        --extra_;
    }
    const auto stride = static_cast<std::size_t>(cfg_.p + 1);
    for (int u : graph_->neighbors(v)) {
        const auto ui = static_cast<std::size_t>(u);
        ++uncolored_deg_[ui];
        if (c >= 0) {
            if (--seen_[ui * stride + static_cast<std::size_t>(c)] == 0) {
                avail_[ui] = static_cast<std::uint16_t>(avail_[ui] | (1U << c));
            }
        }
    }
}

std::vector<int> ColoringState::uncolored_vertices() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(uncolored_));
    for (int v = 0; v < size(); ++v) {
        if (color_[static_cast<std::size_t>(v)] == kUncolored) {
            out.push_back(v);
        }
    }
    return out;
}

TypeDistribution ColoringState::empirical_distribution() const {
    const TypeSpace space(cfg_);
    std::vector<long> counts(space.size(), 0);
    long denominator = 0;
    for (int v = 0; v < size(); ++v) {
        if (graph_->is_boundary(v)) {
            continue;
        }
        ++denominator;
        if (!is_uncolored(v)) {
            continue;
        }
        const VertexType t{uncolored_degree(v), available_count(v)};
        if (!space.contains(t)) {
            throw InternalConsistencyError("uncolored vertex " + std::to_string(v) + " has type (" + to_key(t) +
                                           ") outside the type space");
        }
        ++counts[space.index(t)];
    }
    TypeDistribution z{space};
    if (denominator > 0) {
        for (std::size_t i = 0; i < z.size(); ++i) {
            z[i] = static_cast<double>(counts[i]) / static_cast<double>(denominator);
        }
    }
    return z;
}

std::optional<std::string> ColoringState::invariant_violation() const {
    long uncolored = 0;
    long red = 0;
    long extra = 0;
    long palette = 0;
    for (int v = 0; v < size(); ++v) {
        const Color c = color(v);
        int udeg = 0;
        std::uint32_t seen_mask = 0;
        for (int u : graph_->neighbors(v)) {
            const Color cu = color(u);
            if (cu == kUncolored) {
                ++udeg;
            } else if (cu >= 0) {
                seen_mask |= 1U << cu;
                if (cu == c) {
                    std::ostringstream msg;
                    msg << "edge (" << v << "," << u << ") joins two vertices of color " << static_cast<int>(c);
                    return msg.str();
                }
            }
        }
        const std::uint32_t full = (1U << (cfg_.p + 1)) - 1U;
        if (udeg != uncolored_degree(v) || (full & ~seen_mask) != avail_[static_cast<std::size_t>(v)]) {
            return "cached neighborhood data of vertex " + std::to_string(v) + " is stale";
        }
        if (c == kUncolored) {
            ++uncolored;
            if (available_count(v) < 2) {
                return "uncolored vertex " + std::to_string(v) + " has fewer than 2 available colors";
            }
        } else if (c == kRed) {
            ++red;
        } else if (c == extra_color()) {
            ++extra;
        } else {
            ++palette;
        }
    }
    if (uncolored != uncolored_ || red != red_ || extra != extra_ || uncolored + red + extra + palette != size()) {
        return std::string("color class counts are not conserved");
    }
    return std::nullopt;
}

std::optional<VertexType> vertex_type_of(const ColoringState& state, int v) {
    if (!state.is_uncolored(v)) {
        return std::nullopt;
    }
    return VertexType{state.uncolored_degree(v), state.available_count(v)};
}

ColoringState state_from_fixture(const Fixture& fixture, PaletteConfig cfg) {
    ColoringState state(std::make_shared<const Graph>(fixture.graph), cfg);
    for (const auto& [v, token] : fixture.colors) {
        if (token == "red") {
            state.set_color(v, kRed);
            continue;
        }
        int c = -1;
        try {
            c = std::stoi(token);
        } catch (const std::logic_error&) {
            throw ParseError("fixture color '" + token + "' is neither red nor a palette index");
        }
        if (c < 0 || c > cfg.p) {
            throw ParseError("fixture color " + token + " is outside the palette");
        }
        state.set_color(v, static_cast<Color>(c));
    }
    state.unbuffered_reds().clear();
    for (int v = 0; v < state.size(); ++v) {
        if (state.color(v) == kRed) {
            state.unbuffered_reds().push_back(v);
        }
    }
    return state;
}

} // namespace treecolor
