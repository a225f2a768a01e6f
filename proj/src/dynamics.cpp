#include "treecolor/dynamics.hpp"

#include <sstream>

#include "treecolor/errors.hpp"

namespace treecolor {

namespace {

double degree_weighted_mass(const TypeDistribution& z) {
    double total = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        total += z.space().at(i).d * z[i];
    }
    return total;
}

void require_subcritical(double g) {
    if (!(g < 1.0)) {
        std::ostringstream msg;
        msg << "cascade growth g = " << g << " >= 1 (supercritical)";
        throw SupercriticalError(msg.str());
    }
}

void require_matching(const TypeDistribution& z, const TuningParams& tuning) {
    if (!(z.space() == tuning.weights.space())) {
        throw ConfigurationError("tuning weights and distribution use different (r, p)");
    }
}

double growth_from_q(const TypeVector& q) {
    const int p = q.space().p();
    double sum = 0.0;
    for (int d = 0; d <= q.space().r(); ++d) {
        sum += (d - 1) * q[VertexType{d, 2}];
    }
    return 2.0 / p * sum;
}

double forcing_from_q(const TypeVector& q) {
    const int p = q.space().p();
    double sum = 0.0;
    for (int d = 0; d <= q.space().r(); ++d) {
        sum += q[VertexType{d, 2}];
    }
    return 2.0 / p * sum;
}

// Unnormalized branch balance for t = (d, c); q outside T reads as zero.
double branch_balance(const TypeVector& q, VertexType t) {
    const int p = q.space().p();
    const auto [d, c] = t;
    return -q[t] + (c + 1.0) / p * q[VertexType{d + 1, c + 1}] + static_cast<double>(p - c) / p * q[VertexType{d + 1, c}];
}

} // namespace

TypeVector q_vector(const TypeDistribution& z) {
    const double mass = degree_weighted_mass(z);
    if (!(mass > 0.0)) {
        throw DegenerateDistributionError("no type mass on positive degrees; q is undefined");
    }
    TypeVector q{z.space()};
    for (std::size_t i = 0; i < z.size(); ++i) {
        q[i] = z.space().at(i).d * z[i] / mass;
    }
    return q;
}

double forcing_probability(const TypeDistribution& z) { return forcing_from_q(q_vector(z)); }

double cascade_growth(const TypeDistribution& z) { return growth_from_q(q_vector(z)); }

double remainder_growth(const TypeDistribution& z) {
    const TypeVector q = q_vector(z);
    double sum = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        sum += (q.space().at(i).d - 1) * q[i];
    }
    return sum;
}

double delta_branch(const TypeDistribution& z, VertexType t) {
    if (!z.space().contains(t)) {
        throw ConfigurationError("type (" + to_key(t) + ") is outside the type space");
    }
    const TypeVector q = q_vector(z);
    const double g = growth_from_q(q);
    require_subcritical(g);
    return branch_balance(q, t) / (1.0 - g);
}

TypeVector delta_branch_vector(const TypeDistribution& z) {
    const TypeVector q = q_vector(z);
    const double g = growth_from_q(q);
    require_subcritical(g);
    TypeVector out{z.space()};
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = branch_balance(q, z.space().at(i)) / (1.0 - g);
    }
    return out;
}

double DeltaMatrix::row_sum(std::size_t s) const {
    double sum = 0.0;
    for (std::size_t t = 0; t < size(); ++t) {
        sum += (*this)(s, t);
    }
    return sum;
}

DeltaMatrix delta_matrix(const TypeDistribution& z) {
    const TypeVector branch = delta_branch_vector(z);
    DeltaMatrix m{z.space()};
    for (std::size_t s = 0; s < m.size(); ++s) {
        const int deg = z.space().at(s).d;
        for (std::size_t t = 0; t < m.size(); ++t) {
            m(s, t) = (s == t ? -1.0 : 0.0) + deg * branch[t];
        }
    }
    return m;
}

double expected_cascade_size(const TypeDistribution& z, VertexType s) {
    if (!z.space().contains(s)) {
        throw ConfigurationError("type (" + to_key(s) + ") is outside the type space");
    }
    const TypeVector q = q_vector(z);
    const double g = growth_from_q(q);
    require_subcritical(g);
    return 1.0 + s.d * forcing_from_q(q) / (1.0 - g);
}

TypeVector drift(const TypeDistribution& z, const TuningParams& tuning) {
    require_matching(z, tuning);
    // sum_s w_s z_s Delta_{s,t} = -w_t z_t + (sum_s w_s z_s deg(s)) delta_branch_t
    double branch_rate = 0.0;
    TypeVector out{z.space()};
    for (std::size_t s = 0; s < z.size(); ++s) {
        const double rate = tuning.weights[s] * z[s];
        out[s] = -rate;
        branch_rate += rate * z.space().at(s).d;
    }
    if (branch_rate == 0.0) {
        return out;
    }
    const TypeVector branch = delta_branch_vector(z);
    for (std::size_t t = 0; t < out.size(); ++t) {
        out[t] += branch_rate * branch[t];
    }
    return out;
}

EulerStepResult euler_step(const TypeDistribution& z, const TuningParams& tuning) {
    EulerStepResult result{z, 0};
    if (tuning.epsilon == 0.0) {
        return result;
    }
    const TypeVector f = drift(z, tuning);
    for (std::size_t i = 0; i < z.size(); ++i) {
        double next = z[i] + tuning.epsilon * f[i];
        if (next < 0.0) {
            if (next < -1e-9) {
                ++result.clamped;
            }
            next = 0.0;
        }
        result.z[i] = next;
    }
    return result;
}

} // namespace treecolor
