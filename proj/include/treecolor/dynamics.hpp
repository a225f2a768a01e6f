#pragma once

// Branching-process quantities of a type distribution and the drift of the
// type dynamics. Everything here is a pure function of its arguments.

#include <cstddef>
#include <vector>

#include "treecolor/types.hpp"

namespace treecolor {

/// Size-biased law q_t = deg(t) z_t / sum_s deg(s) z_s: the type of an
/// uncolored neighbor of an uncolored vertex.
/// Throws DegenerateDistributionError when no mass sits on positive degrees.
TypeVector q_vector(const TypeDistribution& z);

/// Probability that a given branch neighbor is forced by a freshly colored
/// parent: (2/p) sum_d q_(d,2).
double forcing_probability(const TypeDistribution& z);

/// Mean offspring of the cascade branching process,
/// g = (2/p) sum_d (d-1) q_(d,2).
double cascade_growth(const TypeDistribution& z);

/// Mean offspring of the branching process describing uncolored components,
/// sum_s (deg(s)-1) q_s.
double remainder_growth(const TypeDistribution& z);

/// Expected net number of vertices of type t created along one branch of a
/// cascade. Reads q only inside the type space. Throws SupercriticalError if g >= 1.
double delta_branch(const TypeDistribution& z, VertexType t);

/// delta_branch for every type at once.
TypeVector delta_branch_vector(const TypeDistribution& z);

/// Dense |T| x |T| matrix, row = activated type s, column = affected type t.
class DeltaMatrix {
public:
    explicit DeltaMatrix(TypeSpace space) : space_(space), values_(space.size() * space.size(), 0.0) {}

    const TypeSpace& space() const { return space_; }
    std::size_t size() const { return space_.size(); }
    double operator()(std::size_t s, std::size_t t) const { return values_[s * size() + t]; }
    double& operator()(std::size_t s, std::size_t t) { return values_[s * size() + t]; }
    double operator()(VertexType s, VertexType t) const { return (*this)(space_.index(s), space_.index(t)); }

    double row_sum(std::size_t s) const;

private:
    TypeSpace space_;
    std::vector<double> values_;
};

/// Expected change in the count of each type t caused by the cascade of an
/// activated vertex of type s: -[s=t] + deg(s) delta_branch(z, t).
DeltaMatrix delta_matrix(const TypeDistribution& z);

/// Expected number of vertices colored by the cascade of a type-s root,
/// root included: 1 + deg(s) b / (1 - g).
double expected_cascade_size(const TypeDistribution& z, VertexType s);

/// F_t(z) = sum_s w_s z_s Delta_{s,t}(z), the epsilon-free rate of change of z.
TypeVector drift(const TypeDistribution& z, const TuningParams& tuning);

struct EulerStepResult {
    TypeDistribution z;
    /// Entries that would have dropped below -1e-9 before clamping at 0.
    int clamped = 0;
};

/// z + epsilon * drift(z), with negative entries clamped at zero.
EulerStepResult euler_step(const TypeDistribution& z, const TuningParams& tuning);

} // namespace treecolor
