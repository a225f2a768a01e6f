#include "treecolor/process.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <numeric>
#include <sstream>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include "treecolor/errors.hpp"
#include "treecolor/list_coloring.hpp"

namespace treecolor {

void BufferReport::merge(const BufferReport& other) {
    rounds = std::max(rounds, other.rounds);
    components += other.components;
    vertices_colored += other.vertices_colored;
    new_red += other.new_red;
    budget_failures += other.budget_failures;
    if (activity_by_round.size() < other.activity_by_round.size()) {
        activity_by_round.resize(other.activity_by_round.size(), 0);
    }
    for (std::size_t j = 0; j < other.activity_by_round.size(); ++j) {
        activity_by_round[j] += other.activity_by_round[j];
    }
}

namespace {

int type_index(const PaletteConfig& cfg, int d, int c) {
    if (d < 0 || d > cfg.r || c < 2 || c > cfg.p) {
        return -2;
    }
    return d * (cfg.p - 1) + (c - 2);
}

Color only_color(std::uint32_t mask) {
    return static_cast<Color>(std::countr_zero(mask));
}

Color pick_color(const CounterRng& rng, Purpose purpose, std::uint64_t vertex, std::uint64_t step,
                 std::uint32_t mask) {
    Color best = kUncolored;
    std::uint64_t best_key = std::numeric_limits<std::uint64_t>::max();
    for (int c = 0; mask != 0; ++c, mask >>= 1) {
        if ((mask & 1U) == 0) {
            continue;
        }
        const std::uint64_t key = rng.color_key(purpose, vertex, step, c);
        if (best == kUncolored || key < best_key) {
            best = static_cast<Color>(c);
            best_key = key;
        }
    }
    return best;
}

struct Pending {
    int v;
    Color color;
    int label;
    int rule;
};

/// Round engine shared by the greedy step and the buffer rounds. Works on
/// the state's scratch, which must have been reset by begin_step().
class Engine {
public:
    Engine(ColoringState& state, std::vector<CascadeRecord>& records, std::array<long, 5>& by_rule)
        : s_(state), sc_(state.scratch()), cfg_(state.config()), records_(records), by_rule_(by_rule),
          type_count_(TypeSpace(state.config()).size()) {}

    void begin_step() {
        sc_.ensure(static_cast<std::size_t>(s_.size()));
        for (int v : sc_.touched) {
            const auto vi = static_cast<std::size_t>(v);
            sc_.step_count[vi] = 0;
            sc_.label[vi] = -1;
            sc_.source[vi] = -1;
            sc_.start_type[vi] = -1;
        }
        sc_.touched.clear();
        sc_.candidates.clear();
        next_.clear();
    }

    /// Forgets which vertices were colored so far in this step while keeping
    /// the start-of-step type snapshot. From here on, rule 3 counts distinct
    /// cascade sources among the colored neighbors instead of neighbors: a
    /// buffer component is colored at once, and on a finite graph a vertex
    /// next to two of its vertices (through a short cycle) is not a meeting
    /// of two cascades.
    void begin_epoch() {
        for (int v : sc_.touched) {
            const auto vi = static_cast<std::size_t>(v);
            sc_.step_count[vi] = 0;
            sc_.label[vi] = -1;
            sc_.source[vi] = -1;
        }
        by_source_ = true;
        sc_.candidates.clear();
        next_.clear();
    }

    int start_type(int v) {
        snap(v);
        return sc_.start_type[static_cast<std::size_t>(v)];
    }

    int new_record(int root, bool from_buffer) {
        CascadeRecord rec;
        rec.root = root;
        const int t = start_type(root);
        if (t >= 0) {
            rec.root_type = TypeSpace(cfg_).at(static_cast<std::size_t>(t));
        } else {
            rec.root_type = VertexType{s_.uncolored_degree(root), s_.available_count(root)};
        }
        rec.from_buffer = from_buffer;
        records_.push_back(std::move(rec));
        return static_cast<int>(records_.size()) - 1;
    }

    /// Commits a batch of simultaneous colorings. Adjacent members of the
    /// batch both turn red when `screen` is set. Returns the number of
    /// vertices colored (palette or red).
    long commit(const std::vector<Pending>& batch, int round, bool screen) {
        if (batch.empty()) {
            return 0;
        }
        sc_.pending.clear();
        for (const auto& p : batch) {
            sc_.pending.insert(p.v);
        }
        conflict_.assign(batch.size(), 0);
        if (screen) {
            for (std::size_t i = 0; i < batch.size(); ++i) {
                for (int u : s_.graph().neighbors(batch[i].v)) {
                    if (sc_.pending.contains(u)) {
                        conflict_[i] = 1;
                        break;
                    }
                }
            }
        }
        for (std::size_t i = 0; i < batch.size(); ++i) {
            const Pending& p = batch[i];
            snap_neighborhood(p.v);
            sc_.label[static_cast<std::size_t>(p.v)] = p.label;
            if (conflict_[i] != 0) {
                s_.set_color(p.v, kRed);
                ++by_rule_[4];
                ++new_red_;
                if (p.label >= 0) {
                    records_[static_cast<std::size_t>(p.label)].collision = true;
                }
            } else if (p.color == kRed) {
                s_.set_color(p.v, kRed);
            } else {
                s_.set_color(p.v, p.color);
                if (p.rule > 0) {
                    ++by_rule_[static_cast<std::size_t>(p.rule)];
                }
                if (p.label >= 0) {
                    count_in_record(p.label, p.v, round);
                }
            }
        }
        for (const auto& p : batch) {
            note_colored(p.v);
        }
        return static_cast<long>(batch.size());
    }

    /// Runs rounds 1, 2, ... until no candidate remains. Returns the number
    /// of the last round that colored anything (0 if none did).
    int run_rounds() {
        int last = 0;
        for (int round = 1; !next_.empty(); ++round) {
            current_.swap(next_);
            next_.clear();
            sc_.candidates.clear();
            bool active = false;

            reds_.clear();
            for (int u : current_) {
                // With source counting, a vertex can run out of colors while
                // seeing a single source; it turns red as well.
                if (s_.is_uncolored(u) &&
                    (sc_.step_count[static_cast<std::size_t>(u)] >= 2 || s_.available_count(u) == 0)) {
                    reds_.push_back(u);
                }
            }
            for (int u : reds_) {
                snap_neighborhood(u);
                for (int w : s_.graph().neighbors(u)) {
                    const int lab = sc_.label[static_cast<std::size_t>(w)];
                    if (lab >= 0 && !s_.is_uncolored(w)) {
                        records_[static_cast<std::size_t>(lab)].collision = true;
                    }
                }
                s_.set_color(u, kRed);
                ++by_rule_[3];
                ++new_red_;
            }
            for (int u : reds_) {
                note_colored(u);
            }
            active = !reds_.empty();

            batch_.clear();
            for (int u : current_) {
                if (s_.is_uncolored(u) && s_.available_count(u) == 1) {
                    batch_.push_back({u, only_color(s_.available_palette(u)), forcing_label(u), 2});
                }
            }
            if (commit(batch_, round, true) > 0) {
                active = true;
            }
            if (active) {
                last = round;
            }
        }
        return last;
    }

    long new_red() const { return new_red_; }

    /// Local exit check over every vertex whose neighborhood changed.
    void check_touched() const {
        for (int v : sc_.touched) {
            const Color c = s_.color(v);
            if (c == kUncolored) {
                if (s_.available_count(v) < 2) {
                    throw InternalConsistencyError("list invariant fails at vertex " + std::to_string(v) +
                                                   " after step " + std::to_string(s_.step()));
                }
                continue;
            }
            if (c == kRed) {
                continue;
            }
            for (int u : s_.graph().neighbors(v)) {
                if (s_.color(u) == c) {
                    std::ostringstream msg;
                    msg << "edge (" << v << "," << u << ") has color " << static_cast<int>(c) << " on both ends";
                    throw InternalConsistencyError(msg.str());
                }
            }
        }
    }

private:
    void snap(int v) {
        const auto vi = static_cast<std::size_t>(v);
        if (sc_.start_type[vi] != -1) {
            return;
        }
        sc_.start_type[vi] =
            s_.is_uncolored(v) ? type_index(cfg_, s_.uncolored_degree(v), s_.available_count(v)) : -2;
        sc_.touched.push_back(v);
    }

    void snap_neighborhood(int v) {
        snap(v);
        for (int u : s_.graph().neighbors(v)) {
            if (s_.is_uncolored(u)) {
                snap(u);
            }
        }
    }

    void note_colored(int v) {
        const int lab = sc_.label[static_cast<std::size_t>(v)];
        for (int u : s_.graph().neighbors(v)) {
            if (!s_.is_uncolored(u)) {
                continue;
            }
            const auto ui = static_cast<std::size_t>(u);
            auto& count = sc_.step_count[ui];
            if (!by_source_) {
                if (count < 255) {
                    ++count;
                }
            } else if (count == 0) {
                count = 1;
                sc_.source[ui] = lab;
            } else if (count == 1 && (lab < 0 || lab != sc_.source[ui])) {
                count = 2;
            }
            if (sc_.candidates.insert(u)) {
                next_.push_back(u);
            }
        }
    }

    int forcing_label(int u) const {
        for (int w : s_.graph().neighbors(u)) {
            const int lab = sc_.label[static_cast<std::size_t>(w)];
            if (lab >= 0 && s_.is_palette(s_.color(w))) {
                return lab;
            }
        }
        return -1;
    }

    void count_in_record(int label, int v, int round) {
        auto& rec = records_[static_cast<std::size_t>(label)];
        const auto gen = static_cast<std::size_t>(round);
        while (rec.generation_counts.size() <= gen) {
            rec.generation_counts.emplace_back(type_count_, 0);
        }
        const int t = sc_.start_type[static_cast<std::size_t>(v)];
        if (t >= 0) {
            ++rec.generation_counts[gen][static_cast<std::size_t>(t)];
        }
        ++rec.total_colored;
    }

    ColoringState& s_;
    StepScratch& sc_;
    PaletteConfig cfg_;
    std::vector<CascadeRecord>& records_;
    std::array<long, 5>& by_rule_;
    std::size_t type_count_;
    long new_red_ = 0;
    bool by_source_ = false;
    std::vector<int> next_;
    std::vector<int> current_;
    std::vector<int> reds_;
    std::vector<Pending> batch_;
    std::vector<char> conflict_;
};

/// Buffer rounds on an engine whose step is already open.
BufferReport run_buffer(ColoringState& state, Engine& engine, const CounterRng& rng) {
    BufferReport report;
    report.activity_by_round.push_back(0);
    StepScratch& sc = state.scratch();
    const Graph& graph = state.graph();
    std::vector<int> frontier;
    std::vector<int> next_frontier;
    std::vector<int> region;
    std::vector<int> component;
    std::vector<std::vector<Color>> lists;
    std::vector<Pending> batch;

    for (int j = 1;; ++j) {
        std::vector<int> reds;
        reds.swap(state.unbuffered_reds());
        if (reds.empty()) {
            break;
        }
        // Uncolored vertices within distance 3 of the reds.
        sc.visited.clear();
        sc.region.clear();
        region.clear();
        frontier.clear();
        // origin[v]: index of the red vertex the search reached v from.
        // Reds whose balls touch (distance at most 7) share a cascade source:
        // on a tree every vertex between them lies in one of the balls, so
        // their cascades cannot meet.
        std::unordered_map<int, int> origin;
        std::vector<int> parent(reds.size());
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](int x) {
            while (parent[static_cast<std::size_t>(x)] != x) {
                x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            }
            return x;
        };
        auto unite = [&](int a, int b) {
            a = find(a);
            b = find(b);
            if (a != b) {
                parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
            }
        };
        for (std::size_t i = 0; i < reds.size(); ++i) {
            if (sc.visited.insert(reds[i])) {
                frontier.push_back(reds[i]);
                origin[reds[i]] = static_cast<int>(i);
            }
        }
        for (int dist = 1; dist <= 4 && !frontier.empty(); ++dist) {
            next_frontier.clear();
            for (int v : frontier) {
                const int from = origin[v];
                for (int u : graph.neighbors(v)) {
                    if (!sc.visited.contains(u)) {
                        if (dist == 4) {
                            continue;
                        }
                        sc.visited.insert(u);
                        next_frontier.push_back(u);
                        origin[u] = from;
                        if (state.is_uncolored(u)) {
                            sc.region.insert(u);
                            region.push_back(u);
                        }
                    } else {
                        unite(from, origin[u]);
                    }
                }
            }
            frontier.swap(next_frontier);
        }
        if (region.empty()) {
            continue;
        }

        engine.begin_epoch();
        const long before = state.uncolored_count();
        const long red_before = engine.new_red();
        const auto epoch_step = static_cast<std::uint64_t>(state.step()) * 4096U + static_cast<std::uint64_t>(j);
        std::sort(region.begin(), region.end());
        sc.visited.clear();
        batch.clear();
        std::vector<std::vector<int>> components;
        for (int root : region) {
            if (!sc.visited.insert(root)) {
                continue;
            }
            component.clear();
            component.push_back(root);
            for (std::size_t head = 0; head < component.size(); ++head) {
                for (int u : graph.neighbors(component[head])) {
                    if (sc.region.contains(u) && sc.visited.insert(u)) {
                        component.push_back(u);
                    }
                }
            }
            std::sort(component.begin(), component.end());
            components.push_back(component);
        }
        std::unordered_map<int, int> source_label;
        for (auto& comp : components) {
            component.swap(comp);
            lists.assign(component.size(), {});
            for (std::size_t i = 0; i < component.size(); ++i) {
                const int v = component[i];
                // Colors that would force an outside neighbor come last.
                std::vector<std::tuple<int, std::uint64_t, Color>> keyed;
                std::uint32_t mask = state.available_palette(v);
                for (int c = 0; mask != 0; ++c, mask >>= 1) {
                    if ((mask & 1U) == 0) {
                        continue;
                    }
                    int forced = 0;
                    for (int u : graph.neighbors(v)) {
                        if (state.is_uncolored(u) && !sc.region.contains(u) && state.available_count(u) == 2 &&
                            ((state.available_palette(u) >> c) & 1U) != 0) {
                            ++forced;
                        }
                    }
                    keyed.emplace_back(forced,
                                       rng.color_key(Purpose::buffer_color, static_cast<std::uint64_t>(v), epoch_step, c),
                                       static_cast<Color>(c));
                }
                std::sort(keyed.begin(), keyed.end());
                for (const auto& kc : keyed) {
                    lists[i].push_back(std::get<2>(kc));
                }
            }
            const auto solved = solve_list_coloring(graph, component, lists);
            ++report.components;
            const int source = find(origin[component.front()]);
            auto found = source_label.find(source);
            if (found == source_label.end()) {
                found = source_label.emplace(source, engine.new_record(component.front(), true)).first;
            }
            const int label = found->second;
            if (solved.success) {
                for (std::size_t i = 0; i < component.size(); ++i) {
                    engine.start_type(component[i]);
                    batch.push_back({component[i], solved.colors[i], label, 0});
                }
                report.vertices_colored += static_cast<long>(component.size());
            } else {
                ++report.budget_failures;
                for (int v : component) {
                    engine.start_type(v);
                    batch.push_back({v, kRed, label, 0});
                }
            }
        }
        // Components are pairwise non-adjacent and properly colored, so no
        // screening is needed.
        for (const auto& p : batch) {
            if (p.color == kRed) {
                ++report.new_red;
            }
        }
        engine.commit(batch, 0, false);
        engine.run_rounds();
        report.new_red += engine.new_red() - red_before;
        report.rounds = j;
        if (report.activity_by_round.size() <= static_cast<std::size_t>(j)) {
            report.activity_by_round.resize(static_cast<std::size_t>(j) + 1, 0);
        }
        report.activity_by_round[static_cast<std::size_t>(j)] += before - state.uncolored_count();
    }
    return report;
}

StepReport run_step(ColoringState& state, const std::vector<Pending>& activations, const CounterRng& rng,
                    bool modified) {
    StepReport report;
    report.step = state.step();
    report.active = static_cast<long>(activations.size());
    Engine engine(state, report.cascades, report.colored_by_rule);
    engine.begin_step();

    std::vector<Pending> batch = activations;
    for (auto& p : batch) {
        p.label = engine.new_record(p.v, false);
        p.rule = 1;
    }
    const long colored0 = engine.commit(batch, 0, true);
    const int last = engine.run_rounds();
    report.rounds = colored0 > 0 ? last + 1 : 0;
    report.new_red = engine.new_red();

    for (const auto& rec : report.cascades) {
        ++report.cascade_count;
        report.cascade_total += rec.total_colored;
        report.max_cascade = std::max(report.max_cascade, rec.total_colored);
    }
    if (modified) {
        std::array<long, 5> buffer_rules{};
        std::vector<CascadeRecord>& records = report.cascades;
        Engine buffer_engine(state, records, buffer_rules);
        report.buffer = run_buffer(state, buffer_engine, rng);
    } else {
        state.unbuffered_reds().clear();
    }
    engine.check_touched();
    report.uncolored_after = state.uncolored_count();
    report.red_after = state.red_count();
    report.extra_after = state.extra_count();
    state.advance_step();
    return report;
}

std::vector<int>& remaining_vertices(ColoringState& state) {
    StepScratch& sc = state.scratch();
    sc.ensure(static_cast<std::size_t>(state.size()));
    if (!sc.remaining_valid) {
        sc.remaining = state.uncolored_vertices();
        sc.remaining_valid = true;
    } else {
        std::erase_if(sc.remaining, [&](int v) { return !state.is_uncolored(v); });
    }
    return sc.remaining;
}

} // namespace

StepReport greedy_step(ColoringState& state, const TuningParams& tuning, const CounterRng& rng, bool modified) {
    validate(tuning);
    const PaletteConfig& cfg = state.config();
    if (tuning.weights.space().size() != TypeSpace(cfg).size()) {
        throw ConfigurationError("tuning weights do not match the palette configuration");
    }
    const auto step = static_cast<std::uint64_t>(state.step());
    std::vector<Pending> activations;
    if (tuning.epsilon > 0.0) {
        for (int v : remaining_vertices(state)) {
            const int t = type_index(cfg, state.uncolored_degree(v), state.available_count(v));
            if (t < 0) {
                throw InternalConsistencyError("uncolored vertex " + std::to_string(v) +
                                               " has a type outside the type space");
            }
            const double prob = tuning.epsilon * tuning.weights[static_cast<std::size_t>(t)];
            if (prob > 0.0 && rng.uniform(Purpose::activation, static_cast<std::uint64_t>(v), step) < prob) {
                activations.push_back({v, kUncolored, -1, 1});
            }
        }
        for (auto& p : activations) {
            p.color = pick_color(rng, Purpose::color_choice, static_cast<std::uint64_t>(p.v), step,
                                 state.available_palette(p.v));
        }
    }
    return run_step(state, activations, rng, modified);
}

StepReport greedy_step_with(ColoringState& state, const std::vector<std::pair<int, Color>>& activations,
                            const CounterRng& rng, bool modified) {
    std::vector<Pending> batch;
    std::vector<char> seen(static_cast<std::size_t>(state.size()), 0);
    for (const auto& [v, c] : activations) {
        if (v < 0 || v >= state.size() || !state.is_uncolored(v)) {
            throw PreconditionError("activated vertex " + std::to_string(v) + " is not an uncolored vertex");
        }
        if (seen[static_cast<std::size_t>(v)]++ != 0) {
            throw PreconditionError("vertex " + std::to_string(v) + " is activated twice");
        }
        if (!state.is_palette(c) || (state.available_palette(v) >> c & 1U) == 0) {
            throw PreconditionError("color " + std::to_string(c) + " is not available to vertex " +
                                    std::to_string(v));
        }
        batch.push_back({v, c, -1, 1});
    }
    return run_step(state, batch, rng, modified);
}

BufferReport buffer_rounds(ColoringState& state, const CounterRng& rng) {
    std::vector<CascadeRecord> records;
    std::array<long, 5> by_rule{};
    Engine engine(state, records, by_rule);
    engine.begin_step();
    BufferReport report = run_buffer(state, engine, rng);
    engine.check_touched();
    return report;
}

CascadeRecord trace_cascade(const ColoringState& state, int v, const CounterRng& rng, std::uint64_t draw) {
    if (v < 0 || v >= state.size() || !state.is_uncolored(v)) {
        throw PreconditionError("cascade root " + std::to_string(v) + " is not an uncolored vertex");
    }
    const PaletteConfig& cfg = state.config();
    const Graph& graph = state.graph();
    const std::size_t type_count = TypeSpace(cfg).size();

    // Overlay of the vertices colored by the cascade; the state stays as is.
    std::unordered_map<int, Color> colored;
    std::unordered_map<int, int> hits;
    auto is_uncolored = [&](int u) { return state.is_uncolored(u) && !colored.contains(u); };
    auto available = [&](int u) {
        std::uint32_t mask = state.available_palette(u);
        for (int w : graph.neighbors(u)) {
            auto it = colored.find(w);
            if (it != colored.end() && it->second >= 0) {
                mask &= ~(1U << it->second);
            }
        }
        return mask;
    };

    CascadeRecord rec;
    rec.root = v;
    rec.root_type = VertexType{state.uncolored_degree(v), state.available_count(v)};
    auto count = [&](int u, std::size_t gen) {
        while (rec.generation_counts.size() <= gen) {
            rec.generation_counts.emplace_back(type_count, 0);
        }
        const int t = type_index(cfg, state.uncolored_degree(u), state.available_count(u));
        if (t >= 0) {
            ++rec.generation_counts[gen][static_cast<std::size_t>(t)];
        }
        ++rec.total_colored;
    };

    std::vector<int> current;
    std::vector<int> next;
    auto note = [&](int u) {
        for (int w : graph.neighbors(u)) {
            if (is_uncolored(w) && hits[w]++ == 0) {
                next.push_back(w);
            }
        }
    };

    colored[v] = pick_color(rng, Purpose::trace_color, static_cast<std::uint64_t>(v), draw, available(v));
    count(v, 0);
    note(v);

    std::vector<int> reds;
    std::vector<std::pair<int, Color>> batch;
    for (std::size_t gen = 1; !next.empty(); ++gen) {
        current.swap(next);
        next.clear();
        std::sort(current.begin(), current.end());
        current.erase(std::unique(current.begin(), current.end()), current.end());
        reds.clear();
        batch.clear();
        for (int u : current) {
            if (!is_uncolored(u)) {
                continue;
            }
            int step_colored = 0;
            for (int w : graph.neighbors(u)) {
                step_colored += colored.contains(w) ? 1 : 0;
            }
            if (step_colored >= 2) {
                reds.push_back(u);
            }
        }
        for (int u : current) {
            if (!is_uncolored(u) || std::find(reds.begin(), reds.end(), u) != reds.end()) {
                continue;
            }
            const std::uint32_t mask = available(u);
            if (std::popcount(mask) == 1) {
                batch.emplace_back(u, only_color(mask));
            }
        }
        for (int u : reds) {
            colored[u] = kRed;
            rec.collision = true;
        }
        std::unordered_set<int> scheduled;
        for (const auto& b : batch) {
            scheduled.insert(b.first);
        }
        std::vector<char> conflict(batch.size(), 0);
        for (std::size_t i = 0; i < batch.size(); ++i) {
            for (int w : graph.neighbors(batch[i].first)) {
                if (scheduled.contains(w)) {
                    conflict[i] = 1;
                }
            }
        }
        for (std::size_t i = 0; i < batch.size(); ++i) {
            if (conflict[i] != 0) {
                colored[batch[i].first] = kRed;
                rec.collision = true;
            } else {
                colored[batch[i].first] = batch[i].second;
                count(batch[i].first, gen);
            }
        }
        hits.clear();
        for (int u : reds) {
            note(u);
        }
        for (const auto& b : batch) {
            note(b.first);
        }
    }
    return rec;
}

Phase1Result run_phase1(ColoringState& state, const TuningParams& tuning, long steps, const CounterRng& rng,
                        const Phase1Options& options) {
    if (steps < 0) {
        throw ConfigurationError("the number of steps must be nonnegative");
    }
    Phase1Result result;
    result.reports.reserve(static_cast<std::size_t>(steps));
    result.distributions.reserve(static_cast<std::size_t>(steps) + 1);
    result.distributions.push_back(state.empirical_distribution());
    for (long i = 0; i < steps; ++i) {
        const long before = state.uncolored_count();
        StepReport report = greedy_step(state, tuning, rng, options.modified);
        if (state.uncolored_count() > before) {
            throw InternalConsistencyError("the colored set shrank during step " + std::to_string(report.step));
        }
        for (const auto& rec : report.cascades) {
            if (!rec.from_buffer) {
                ++result.cascade_sizes[rec.total_colored];
            }
        }
        result.buffer.merge(report.buffer);
        if (!options.keep_cascades) {
            report.cascades.clear();
            report.cascades.shrink_to_fit();
        }
        if (options.full_checks) {
            if (auto violation = state.invariant_violation()) {
                throw InternalConsistencyError("after step " + std::to_string(report.step) + ": " + *violation);
            }
        }
        result.reports.push_back(std::move(report));
        result.distributions.push_back(state.empirical_distribution());
    }
    return result;
}

} // namespace treecolor
