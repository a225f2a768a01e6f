#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace treecolor {

/// Regularity r of the tree and palette size p.
struct PaletteConfig {
    int r = 4;
    int p = 3;

    friend bool operator==(const PaletteConfig&, const PaletteConfig&) = default;
};

/// Throws ConfigurationError unless r >= 3 and 2 <= p <= r.
void validate(const PaletteConfig& cfg);

/// Type of an uncolored vertex: d uncolored neighbors, c available palette colors.
struct VertexType {
    int d = 0;
    int c = 0;

    friend bool operator==(const VertexType&, const VertexType&) = default;
    friend auto operator<=>(const VertexType&, const VertexType&) = default;
};

/// "d,c", the key used in serialized files.
std::string to_key(VertexType t);
/// Inverse of to_key. Throws ParseError.
VertexType type_from_key(const std::string& key);

/// The finite type set {(d,c) : 0 <= d <= r, 2 <= c <= p}, ordered
/// lexicographically by (d, c). That order is the vector index everywhere.
class TypeSpace {
public:
    explicit TypeSpace(PaletteConfig cfg);

    const PaletteConfig& config() const { return cfg_; }
    int r() const { return cfg_.r; }
    int p() const { return cfg_.p; }
    std::size_t size() const { return static_cast<std::size_t>((cfg_.r + 1) * (cfg_.p - 1)); }

    bool contains(VertexType t) const { return t.d >= 0 && t.d <= cfg_.r && t.c >= 2 && t.c <= cfg_.p; }
    std::size_t index(VertexType t) const { return static_cast<std::size_t>(t.d * (cfg_.p - 1) + (t.c - 2)); }
    VertexType at(std::size_t i) const {
        const int w = cfg_.p - 1;
        return {static_cast<int>(i) / w, static_cast<int>(i) % w + 2};
    }

    friend bool operator==(const TypeSpace&, const TypeSpace&) = default;

private:
    PaletteConfig cfg_;
};

/// All types of cfg in canonical order.
std::vector<VertexType> type_space(const PaletteConfig& cfg);

/// A real vector indexed by the type space (distributions, q, drift).
class TypeVector {
public:
    /// Zero vector on the (4, 3) space.
    TypeVector() : TypeVector(TypeSpace(PaletteConfig{})) {}
    explicit TypeVector(TypeSpace space) : space_(space), values_(space.size(), 0.0) {}
    TypeVector(TypeSpace space, std::vector<double> values);

    const TypeSpace& space() const { return space_; }
    std::size_t size() const { return values_.size(); }

    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }
    /// Zero for types outside the space.
    double operator[](VertexType t) const { return space_.contains(t) ? values_[space_.index(t)] : 0.0; }
    double& at(VertexType t);

    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    double sum() const;

    friend bool operator==(const TypeVector&, const TypeVector&) = default;

private:
    TypeSpace space_;
    std::vector<double> values_;
};

/// z_t: the probability that a vertex is uncolored with type t.
using TypeDistribution = TypeVector;

/// All mass on (r, p): the state before anything is colored.
TypeDistribution initial_distribution(const PaletteConfig& cfg);

/// Throws ConfigurationError unless every entry is >= 0 and the total is <= 1 + 1e-9.
void validate_distribution(const TypeDistribution& z);

/// Activation weights per type and the process step size epsilon.
struct TuningParams {
    TypeVector weights;
    double epsilon = 0.0;

    double max_weight() const;
};

/// Throws ConfigurationError on negative weights, negative epsilon, or epsilon * max weight > 1.
void validate(const TuningParams& tuning);

/// Weight 2^(2-2d) for d != 1 and 2^-10 for d = 1, favouring vertices with few
/// uncolored neighbors. These are the weights the certificates are issued for.
TuningParams standard_tuning(const PaletteConfig& cfg, double epsilon);

/// All weights zero.
TuningParams zero_tuning(const PaletteConfig& cfg, double epsilon);

} // namespace treecolor
