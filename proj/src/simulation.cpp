#include "treecolor/simulation.hpp"

#include <cmath>
#include <sstream>

#include "treecolor/errors.hpp"
#include "treecolor/io.hpp"

namespace treecolor {

void validate(const SimulationConfig& config) {
    validate(config.cfg);
    validate(config.tuning);
    if (config.tuning.weights.space() != TypeSpace(config.cfg)) {
        throw ConfigurationError("tuning weights do not match (r, p)");
    }
    if (config.steps < 0) {
        throw ConfigurationError("steps must be nonnegative");
    }
    if (config.kind == GraphKind::random_regular) {
        if (config.n <= config.cfg.r) {
            throw ConfigurationError("n must exceed r");
        }
        if ((config.n * config.cfg.r) % 2 != 0) {
            throw ConfigurationError("n * r must be even");
        }
    } else if (config.kind == GraphKind::tree_ball) {
        if (config.radius < 1) {
            throw ConfigurationError("tree ball radius must be at least 1");
        }
    } else {
        throw ConfigurationError("simulations run on random_regular or tree_ball graphs");
    }
}

std::shared_ptr<const Graph> build_graph(const SimulationConfig& config) {
    if (config.kind == GraphKind::tree_ball) {
        return std::make_shared<const Graph>(make_tree_ball(config.cfg.r, config.radius));
    }
    return std::make_shared<const Graph>(
        gen_regular_graph(static_cast<int>(config.n), config.cfg.r, config.graph_seed));
}

SimulationResult simulate(const SimulationConfig& config) {
    validate(config);
    auto graph = build_graph(config);
    SimulationResult out;
    out.state = std::make_unique<ColoringState>(graph, config.cfg);
    ColoringState& state = *out.state;
    const CounterRng rng(config.seed);

    Phase1Options options;
    options.modified = config.modified;
    options.full_checks = config.full_checks;
    const Phase1Result phase1 = run_phase1(state, config.tuning, config.steps, rng, options);
    out.stats = make_run_stats(phase1, config.cfg, config.tuning, state.size());
    out.stats.graph_seed = config.graph_seed;
    out.stats.seed = config.seed;
    out.stats.modified = config.modified;
    out.stats.phase1_red_frac = static_cast<double>(state.red_count()) / static_cast<double>(state.size());
    out.phase1_z = phase1.distributions.back();
    out.phase1_components = component_stats(state);
    out.stats.component_histogram = out.phase1_components.histogram;

    if (config.finish) {
        out.completion = complete_remainder(state, rng);
        out.tidy = tidy_to_proper(state, rng);
        out.violations = verify_proper(state);
    } else {
        out.violations = verify_proper(state);
        std::erase_if(out.violations, [](const Violation& v) { return v.color == kRed; });
    }
    out.stats.violations = static_cast<long>(out.violations.size());
    out.stats.completion_failures = out.completion.failures;
    out.stats.tidy_failures = out.tidy.failures;
    out.stats.final_red_frac = static_cast<double>(state.red_count()) / static_cast<double>(state.size());
    out.stats.final_extra_frac = static_cast<double>(state.extra_count()) / static_cast<double>(state.size());
    return out;
}

std::string weights_to_string(const TypeVector& weights) {
    std::string out;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (i > 0) {
            out += ';';
        }
        out += to_key(weights.space().at(i)) + ":" + format_double(weights[i]);
    }
    return out;
}

ConfigEntries describe(const SimulationConfig& config) {
    ConfigEntries out;
    out.emplace_back("r", std::to_string(config.cfg.r));
    out.emplace_back("p", std::to_string(config.cfg.p));
    out.emplace_back("epsilon", format_double(config.tuning.epsilon));
    out.emplace_back("weights", weights_to_string(config.tuning.weights));
    out.emplace_back("graph", to_string(config.kind));
    if (config.kind == GraphKind::tree_ball) {
        out.emplace_back("radius", std::to_string(config.radius));
    } else {
        out.emplace_back("n", std::to_string(config.n));
    }
    out.emplace_back("graph_seed", std::to_string(config.graph_seed));
    out.emplace_back("seed", std::to_string(config.seed));
    out.emplace_back("steps", std::to_string(config.steps));
    out.emplace_back("modified", config.modified ? "true" : "false");
    return out;
}

long steps_for_time(double x, double epsilon) {
    if (!(epsilon > 0.0) || !(x >= 0.0) || !std::isfinite(x)) {
        throw ConfigurationError("steps_for_time needs epsilon > 0 and a finite time >= 0");
    }
    return static_cast<long>(std::ceil(x / epsilon - 1e-9));
}

} // namespace treecolor
