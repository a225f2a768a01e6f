#include "treecolor/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "treecolor/dynamics.hpp"
#include "treecolor/errors.hpp"

namespace treecolor {

namespace {

bool close(double a, double b, double rel = 1e-12) {
    return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;
};

/// Weighted least squares y = slope * x + intercept; residual is the
/// weighted root-mean-square error.
LinearFit weighted_fit(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& w) {
    double sw = 0.0;
    double sx = 0.0;
    double sy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sw += w[i];
        sx += w[i] * x[i];
        sy += w[i] * y[i];
    }
    const double mx = sx / sw;
    const double my = sy / sw;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += w[i] * (x[i] - mx) * (x[i] - mx);
        sxy += w[i] * (x[i] - mx) * (y[i] - my);
    }
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double sse = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double e = y[i] - (fit.slope * x[i] + fit.intercept);
        sse += w[i] * e * e;
    }
    fit.residual = std::sqrt(sse / sw);
    return fit;
}

int type_index_of(const PaletteConfig& cfg, int d, int c) {
    if (d < 0 || d > cfg.r || c < 2 || c > cfg.p) {
        return -1;
    }
    return d * (cfg.p - 1) + (c - 2);
}

/// Uniform index in [0, size) from the sampling stream.
std::size_t uniform_index(const CounterRng& rng, std::uint64_t a, std::uint64_t b, std::size_t size) {
    const auto k = static_cast<std::size_t>(rng.uniform(Purpose::sampling, a, b) * static_cast<double>(size));
    return std::min(k, size - 1);
}

} // namespace

RunStats make_run_stats(const Phase1Result& result, const PaletteConfig& cfg, const TuningParams& tuning, long n,
                        long initial_uncolored, long initial_red, long initial_extra) {
    if (n <= 0) {
        throw ConfigurationError("run statistics need a positive vertex count");
    }
    RunStats stats;
    stats.cfg = cfg;
    stats.tuning = tuning;
    stats.n = n;
    stats.cascade_histogram = result.cascade_sizes;
    stats.buffer = result.buffer;
    const double nn = static_cast<double>(n);

    auto row = [&](long step, std::size_t dist_index) {
        StepStats s;
        s.step = step;
        s.time = static_cast<double>(step) * tuning.epsilon;
        s.z = result.distributions.at(dist_index);
        return s;
    };
    if (!result.distributions.empty()) {
        StepStats first = row(0, 0);
        const long start_step = result.reports.empty() ? 0 : result.reports.front().step;
        first.step = start_step;
        first.time = static_cast<double>(start_step) * tuning.epsilon;
        first.red_frac = static_cast<double>(initial_red) / nn;
        first.extra_frac = static_cast<double>(initial_extra) / nn;
        first.uncolored_frac = static_cast<double>(initial_uncolored < 0 ? n : initial_uncolored) / nn;
        stats.steps.push_back(first);
    }
    for (std::size_t i = 0; i < result.reports.size(); ++i) {
        const StepReport& rep = result.reports[i];
        StepStats s = row(rep.step + 1, i + 1);
        s.uncolored_frac = static_cast<double>(rep.uncolored_after) / nn;
        s.red_frac = static_cast<double>(rep.red_after) / nn;
        s.extra_frac = static_cast<double>(rep.extra_after) / nn;
        s.active = rep.active;
        s.mean_cascade =
            rep.cascade_count > 0 ? static_cast<double>(rep.cascade_total) / static_cast<double>(rep.cascade_count) : 0.0;
        s.max_cascade = rep.max_cascade;
        s.rounds = rep.rounds;
        ++stats.rounds_histogram[rep.rounds];
        stats.steps.push_back(std::move(s));
    }
    if (!result.reports.empty()) {
        stats.phase1_red_frac = stats.steps.back().red_frac;
    }
    return stats;
}

double tv_distance(const TypeVector& a, const TypeVector& b) {
    if (a.size() != b.size()) {
        throw ConfigurationError("distributions live on different type spaces");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sum += std::abs(a[i] - b[i]);
    }
    return 0.5 * sum;
}

double trajectory_distance(const RunStats& stats, const Certificate& cert) {
    if (stats.cfg.r != cert.cfg.r || stats.cfg.p != cert.cfg.p) {
        throw ConfigurationError("run statistics and certificate use different (r, p)");
    }
    if (!(stats.tuning.epsilon > 0.0)) {
        throw ConfigurationError("run statistics need a positive epsilon to map steps to times");
    }
    if (cert.tuning.epsilon > 0.0 && !close(cert.tuning.epsilon, stats.tuning.epsilon)) {
        throw ConfigurationError("run epsilon differs from the certificate's epsilon");
    }
    const auto& wa = stats.tuning.weights;
    const auto& wb = cert.tuning.weights;
    if (wa.size() != wb.size()) {
        throw ConfigurationError("run and certificate weights have different sizes");
    }
    for (std::size_t i = 0; i < wa.size(); ++i) {
        if (!close(wa[i], wb[i])) {
            throw ConfigurationError("run and certificate use different activation weights");
        }
    }
    if (!cert.R || cert.samples.empty()) {
        throw ConfigurationError("certificate has no stopping time");
    }
    double sup = 0.0;
    for (const auto& s : stats.steps) {
        if (!close(s.time, static_cast<double>(s.step) * stats.tuning.epsilon, 1e-9)) {
            throw ConfigurationError("step times are not step * epsilon");
        }
        if (s.time > *cert.R + 1e-9) {
            break;
        }
        const TypeDistribution sigma = interpolate(cert, s.time);
        for (std::size_t i = 0; i < sigma.size(); ++i) {
            sup = std::max(sup, std::abs(s.z[i] - sigma[i]));
        }
    }
    return sup;
}

double mean_trajectory_distance(const std::vector<RunStats>& runs, const Certificate& cert) {
    if (runs.empty()) {
        throw InsufficientDataError("no runs to aggregate");
    }
    double sum = 0.0;
    for (const auto& run : runs) {
        sum += trajectory_distance(run, cert);
    }
    return sum / static_cast<double>(runs.size());
}

TailFit cascade_tail_fit(const std::map<int, long>& histogram) {
    TailFit fit;
    double weighted = 0.0;
    for (const auto& [size, count] : histogram) {
        if (count < 0) {
            throw ConfigurationError("histogram counts must be nonnegative");
        }
        fit.samples += count;
        weighted += static_cast<double>(size) * static_cast<double>(count);
    }
    if (fit.samples < 100) {
        throw InsufficientDataError("tail fit needs at least 100 samples, got " + std::to_string(fit.samples));
    }
    fit.mean = weighted / static_cast<double>(fit.samples);
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> w;
    long at_least = fit.samples;
    for (const auto& [size, count] : histogram) {
        if (count == 0) {
            continue;
        }
        x.push_back(static_cast<double>(size));
        y.push_back(std::log(static_cast<double>(at_least) / static_cast<double>(fit.samples)));
        w.push_back(static_cast<double>(count));
        at_least -= count;
    }
    if (x.size() < 2) {
        fit.degenerate = true;
        return fit;
    }
    const LinearFit lf = weighted_fit(x, y, w);
    fit.slope = lf.slope;
    fit.decay_rate = -lf.slope;
    fit.residual = lf.residual;
    return fit;
}

RedScaling red_scaling(const std::vector<std::pair<double, double>>& results) {
    std::map<double, std::vector<double>> by_eps;
    for (const auto& [eps, red] : results) {
        if (!(eps > 0.0) || red < 0.0 || red > 1.0) {
            throw ConfigurationError("red scaling needs epsilon > 0 and red fractions in [0, 1]");
        }
        by_eps[eps].push_back(red);
    }
    long usable = 0;
    for (const auto& [eps, reds] : by_eps) {
        usable += reds.size() >= 3 ? 1 : 0;
    }
    if (by_eps.size() < 3 || usable < static_cast<long>(by_eps.size())) {
        throw InsufficientDataError("red scaling needs at least 3 epsilon values with at least 3 seeds each");
    }
    RedScaling out;
    for (const auto& [eps, reds] : by_eps) {
        const double mean = std::accumulate(reds.begin(), reds.end(), 0.0) / static_cast<double>(reds.size());
        out.groups.push_back({eps, mean, static_cast<long>(reds.size())});
    }
    std::vector<double> x;
    std::vector<double> y;
    for (const auto& g : out.groups) {
        if (g.mean_red > 0.0) {
            x.push_back(std::log(g.epsilon));
            y.push_back(std::log(g.mean_red));
        }
    }
    for (std::size_t i = 0; i < out.groups.size(); ++i) {
        for (std::size_t k = i + 1; k < out.groups.size(); ++k) {
            const auto& small = out.groups[i];
            const auto& large = out.groups[k];
            if (close(large.epsilon, 2.0 * small.epsilon, 1e-9) && large.mean_red > 0.0) {
                out.halving_ratios.emplace_back(large.epsilon, small.mean_red / large.mean_red);
            }
        }
    }
    if (x.size() < 2) {
        out.degenerate = true;
        return out;
    }
    const LinearFit lf = weighted_fit(x, y, std::vector<double>(x.size(), 1.0));
    out.slope = lf.slope;
    out.intercept = lf.intercept;
    return out;
}

NeighborLaw neighbor_type_law(const ColoringState& state, long samples, const CounterRng& rng) {
    if (samples <= 0) {
        throw ConfigurationError("sample count must be positive");
    }
    const PaletteConfig& cfg = state.config();
    const Graph& graph = state.graph();
    std::vector<int> eligible;
    for (int v = 0; v < state.size(); ++v) {
        if (state.is_uncolored(v) && state.uncolored_degree(v) > 0) {
            eligible.push_back(v);
        }
    }
    if (eligible.empty()) {
        throw InsufficientDataError("no uncolored vertex has an uncolored neighbor");
    }
    NeighborLaw law{TypeVector(TypeSpace(cfg)), q_vector(state.empirical_distribution()), 0.0, samples};
    std::vector<int> nbrs;
    for (long i = 0; i < samples; ++i) {
        const auto ui = static_cast<std::uint64_t>(i);
        const int v = eligible[uniform_index(rng, ui, 0, eligible.size())];
        nbrs.clear();
        for (int u : graph.neighbors(v)) {
            if (state.is_uncolored(u)) {
                nbrs.push_back(u);
            }
        }
        const int u = nbrs[uniform_index(rng, ui, 1, nbrs.size())];
        const int t = type_index_of(cfg, state.uncolored_degree(u), state.available_count(u));
        if (t < 0) {
            throw InternalConsistencyError("uncolored vertex " + std::to_string(u) + " has a type outside the type space");
        }
        law.empirical[static_cast<std::size_t>(t)] += 1.0;
    }
    for (std::size_t t = 0; t < law.empirical.size(); ++t) {
        law.empirical[t] /= static_cast<double>(samples);
    }
    law.tv = tv_distance(law.empirical, law.q);
    return law;
}

ComponentStats component_stats(const ColoringState& state) {
    ComponentStats out;
    const Graph& graph = state.graph();
    std::vector<char> seen(static_cast<std::size_t>(state.size()), 0);
    std::vector<int> queue;
    double branch_num = 0.0;
    double branch_den = 0.0;
    long total = 0;
    for (int root = 0; root < state.size(); ++root) {
        if (!state.is_uncolored(root) || seen[static_cast<std::size_t>(root)] != 0) {
            continue;
        }
        queue.assign(1, root);
        seen[static_cast<std::size_t>(root)] = 1;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            for (int u : graph.neighbors(queue[head])) {
                if (state.is_uncolored(u) && seen[static_cast<std::size_t>(u)] == 0) {
                    seen[static_cast<std::size_t>(u)] = 1;
                    queue.push_back(u);
                }
            }
        }
        const auto k = static_cast<long>(queue.size());
        ++out.count;
        ++out.histogram[k];
        total += k;
        out.max_size = std::max(out.max_size, k);
        branch_num += static_cast<double>(k) * static_cast<double>(k - 1);
        branch_den += 2.0 * static_cast<double>(k - 1);
    }
    if (out.count > 0) {
        out.mean_size = static_cast<double>(total) / static_cast<double>(out.count);
    }
    if (branch_den > 0.0) {
        out.mean_branch_size = branch_num / branch_den;
    }
    return out;
}

CascadeLaw cascade_law(const ColoringState& state, long samples, const CounterRng& rng) {
    if (samples <= 0) {
        throw ConfigurationError("sample count must be positive");
    }
    const PaletteConfig& cfg = state.config();
    const TypeSpace space(cfg);
    std::vector<int> roots;
    for (int v = 0; v < state.size(); ++v) {
        if (state.is_uncolored(v) && !state.graph().is_boundary(v)) {
            roots.push_back(v);
        }
    }
    if (roots.empty()) {
        throw InsufficientDataError("no uncolored vertex to start a cascade from");
    }
    const TypeDistribution z = state.empirical_distribution();
    const TypeVector q = q_vector(z);

    CascadeLaw law{samples, 0.0, 0.0, {}, 0, TypeVector(space), TypeVector(space), 0.0, 0.0, 0.0};
    double size_sum = 0.0;
    double closed_sum = 0.0;
    double branches = 0.0;
    double colored_branches = 0.0;
    for (long i = 0; i < samples; ++i) {
        const auto ui = static_cast<std::uint64_t>(i);
        const int v = roots[uniform_index(rng, ui, 2, roots.size())];
        const CascadeRecord rec = trace_cascade(state, v, rng, ui);
        size_sum += rec.total_colored;
        closed_sum += expected_cascade_size(z, rec.root_type);
        ++law.histogram[rec.total_colored];
        law.collisions += rec.collision ? 1 : 0;
        branches += rec.root_type.d;
        if (rec.generation_counts.size() > 1) {
            for (std::size_t t = 0; t < space.size(); ++t) {
                law.gen1_empirical[t] += rec.generation_counts[1][t];
                colored_branches += rec.generation_counts[1][t];
            }
        }
    }
    const double nn = static_cast<double>(samples);
    law.mean_size = size_sum / nn;
    law.closed_form_mean = closed_sum / nn;
    if (branches > 0.0) {
        for (std::size_t t = 0; t < space.size(); ++t) {
            law.gen1_empirical[t] /= branches;
        }
        law.none_empirical = 1.0 - colored_branches / branches;
    }
    double b = 0.0;
    for (std::size_t t = 0; t < space.size(); ++t) {
        if (space.at(t).c == 2) {
            law.gen1_expected[t] = 2.0 / cfg.p * q[t];
            b += law.gen1_expected[t];
        }
    }
    law.none_expected = 1.0 - b;
    law.gen1_tv = tv_distance(law.gen1_empirical, law.gen1_expected) +
                  0.5 * std::abs(law.none_empirical - law.none_expected);
    return law;
}

} // namespace treecolor
