#include "treecolor/types.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "treecolor/errors.hpp"

namespace treecolor {

void validate(const PaletteConfig& cfg) {
    if (cfg.r < 3) {
        throw ConfigurationError("regularity r must be >= 3, got " + std::to_string(cfg.r));
    }
    if (cfg.p < 2 || cfg.p > cfg.r) {
        throw ConfigurationError("palette size p must satisfy 2 <= p <= r, got p=" + std::to_string(cfg.p) +
                                 " r=" + std::to_string(cfg.r));
    }
    // Color masks are 16 bits wide (palette plus the extra color).
    if (cfg.p > 15) {
        throw ConfigurationError("palette size p must be <= 15");
    }
}

std::string to_key(VertexType t) { return std::to_string(t.d) + "," + std::to_string(t.c); }

VertexType type_from_key(const std::string& key) {
    const auto comma = key.find(',');
    if (comma == std::string::npos) {
        throw ParseError("type key '" + key + "' is not of the form d,c");
    }
    try {
        std::size_t used_d = 0;
        std::size_t used_c = 0;
        const std::string ds = key.substr(0, comma);
        const std::string cs = key.substr(comma + 1);
        VertexType t{std::stoi(ds, &used_d), std::stoi(cs, &used_c)};
        if (used_d != ds.size() || used_c != cs.size()) {
            throw ParseError("type key '" + key + "' has trailing characters");
        }
        return t;
    } catch (const std::logic_error&) {
        throw ParseError("type key '" + key + "' is not of the form d,c");
    }
}

TypeSpace::TypeSpace(PaletteConfig cfg) : cfg_(cfg) { validate(cfg_); }

std::vector<VertexType> type_space(const PaletteConfig& cfg) {
    const TypeSpace space(cfg);
    std::vector<VertexType> out;
    out.reserve(space.size());
    for (std::size_t i = 0; i < space.size(); ++i) {
        out.push_back(space.at(i));
    }
    return out;
}

TypeVector::TypeVector(TypeSpace space, std::vector<double> values) : space_(space), values_(std::move(values)) {
    if (values_.size() != space_.size()) {
        throw ConfigurationError("type vector has " + std::to_string(values_.size()) + " entries, expected " +
                                 std::to_string(space_.size()));
    }
}

double& TypeVector::at(VertexType t) {
    if (!space_.contains(t)) {
        throw ConfigurationError("type (" + to_key(t) + ") is outside the type space");
    }
    return values_[space_.index(t)];
}

double TypeVector::sum() const { return std::accumulate(values_.begin(), values_.end(), 0.0); }

TypeDistribution initial_distribution(const PaletteConfig& cfg) {
    TypeDistribution z{TypeSpace(cfg)};
    z.at({cfg.r, cfg.p}) = 1.0;
    return z;
}

void validate_distribution(const TypeDistribution& z) {
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (!(z[i] >= 0.0)) {
            throw ConfigurationError("distribution entry (" + to_key(z.space().at(i)) + ") is negative or NaN");
        }
    }
    if (z.sum() > 1.0 + 1e-9) {
        throw ConfigurationError("distribution mass exceeds 1");
    }
}

double TuningParams::max_weight() const {
    const auto& w = weights.values();
    return w.empty() ? 0.0 : *std::max_element(w.begin(), w.end());
}

void validate(const TuningParams& tuning) {
    for (std::size_t i = 0; i < tuning.weights.size(); ++i) {
        if (!(tuning.weights[i] >= 0.0) || !std::isfinite(tuning.weights[i])) {
            throw ConfigurationError("activation weight for (" + to_key(tuning.weights.space().at(i)) +
                                     ") must be a nonnegative real");
        }
    }
    if (!(tuning.epsilon >= 0.0) || !std::isfinite(tuning.epsilon)) {
        throw ConfigurationError("epsilon must be a nonnegative real");
    }
    if (tuning.epsilon * tuning.max_weight() > 1.0) {
        std::ostringstream msg;
        msg << "epsilon * max weight = " << tuning.epsilon * tuning.max_weight()
            << " exceeds 1; activation probabilities must be <= 1";
        throw ConfigurationError(msg.str());
    }
}

TuningParams standard_tuning(const PaletteConfig& cfg, double epsilon) {
    TuningParams tuning{TypeVector{TypeSpace(cfg)}, epsilon};
    for (std::size_t i = 0; i < tuning.weights.size(); ++i) {
        const int d = tuning.weights.space().at(i).d;
        tuning.weights[i] = d == 1 ? std::ldexp(1.0, -10) : std::ldexp(1.0, 2 - 2 * d);
    }
    return tuning;
}

TuningParams zero_tuning(const PaletteConfig& cfg, double epsilon) { return {TypeVector{TypeSpace(cfg)}, epsilon}; }

} // namespace treecolor
