// Acceptance suite: one PASS/FAIL line per criterion. Every tolerance and
// run size is pinned below. The exit status is nonzero when any line fails,
// unless that criterion was named with --known-failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <iomanip>
#include <iostream>
#include <set>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "treecolor/certifier.hpp"
#include "treecolor/dynamics.hpp"
#include "treecolor/simulation.hpp"
#include "treecolor/stats.hpp"

using namespace treecolor;

namespace {

constexpr PaletteConfig k43{4, 3};
constexpr PaletteConfig k64{6, 4};
constexpr double kThreshold = 0.99999;

// Criterion limits.
constexpr double kCertifySeconds43 = 60.0;
constexpr double kCertifySeconds64 = 120.0;
constexpr double kRowSumTol = 1e-10;
constexpr int kRowSumDraws = 1000;
constexpr double kEulerRatioLo = 1.7;
constexpr double kEulerRatioHi = 2.3;
constexpr double kEulerEpsilon = 0.02;
constexpr long kTrajectoryN = 200000;
constexpr double kTrajectoryEpsilon = 0.02;
constexpr int kTrajectorySeeds = 5;
constexpr double kTrajectoryTol = 0.02;
constexpr long kLawN = 200000;
constexpr double kLawEpsilon = 0.02;
constexpr long kLawSamples = 10000;
constexpr double kNeighborTvTol = 0.02;
constexpr double kCascadeMeanRel = 0.10;
constexpr double kGen1TvTol = 0.02;
constexpr long kComponentN = 200000;
constexpr double kComponentEpsilon = 0.01;
constexpr double kComponentTime = 12.5;
constexpr double kComponentRel = 0.15;
constexpr long kRedN = 200000;
constexpr int kRedSeeds = 3;
constexpr double kHalvingLo = 0.3;
constexpr double kHalvingHi = 0.7;
constexpr long kEndToEndN = 100000;
constexpr double kEndToEndEpsilon43 = 0.01;
constexpr double kEndToEndEpsilon64 = 0.005;
constexpr int kEndToEndSeeds64 = 3;
constexpr double kExtraTol = 0.05;
constexpr double kLateRoundShare = 0.10;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(double x, int digits = 4) {
    std::ostringstream out;
    out << std::setprecision(digits) << x;
    return out.str();
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::set<int> failed;

void report(int id, const std::string& name, const std::function<Outcome()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) {
        failed.insert(id);
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << std::setw(2) << id << " " << name << ": " << o.detail << " ["
              << fmt(seconds_since(start), 3) << " s]" << std::endl;
}

IntegrationControl default_control() {
    IntegrationControl control;
    control.step = 1e-3;
    control.halvings = 2;
    return control;
}

// Random distribution with total mass in (0, 1], rescaled until g < 0.95.
TypeDistribution random_subcritical(const PaletteConfig& cfg, std::mt19937_64& gen) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    TypeDistribution z{TypeSpace(cfg)};
    for (;;) {
        double total = 0.0;
        for (std::size_t i = 0; i < z.size(); ++i) {
            z[i] = u(gen) * u(gen);
            total += z[i];
        }
        const double mass = 0.05 + 0.95 * u(gen);
        for (std::size_t i = 0; i < z.size(); ++i) {
            z[i] *= mass / total;
        }
        if (cascade_growth(z) < 0.95) {
            return z;
        }
    }
}

SimulationConfig base_config(PaletteConfig cfg, long n, double epsilon, std::uint64_t seed, long steps) {
    SimulationConfig config;
    config.cfg = cfg;
    config.tuning = standard_tuning(cfg, epsilon);
    config.n = n;
    config.graph_seed = seed;
    config.seed = seed;
    config.steps = steps;
    return config;
}

Outcome certify_outcome(const Certificate& cert, double seconds, double limit) {
    std::string detail = "status=" + cert.status;
    if (cert.R) {
        detail += " R=" + fmt(*cert.R, 6);
    }
    detail += " margin_g=" + fmt(cert.margin_g, 3) + " margin_m=" + fmt(cert.margin_remainder, 3) +
              " time=" + fmt(seconds, 3) + "s (limit " + fmt(limit) + "s)";
    return {cert.certified() && seconds < limit, detail};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria"};
    std::vector<int> known;
    app.add_option("--known-failure", known, "Criterion whose failure is documented and does not fail the run");
    CLI11_PARSE(app, argc, argv);

    std::optional<Certificate> cert43;
    std::optional<Certificate> cert64;

    report(1, "certify (4,3)", [&] {
        const auto start = std::chrono::steady_clock::now();
        cert43 = certify(k43, standard_tuning(k43, 0.0), kThreshold, default_control());
        return certify_outcome(*cert43, seconds_since(start), kCertifySeconds43);
    });

    report(2, "certify (6,4)", [&] {
        const auto start = std::chrono::steady_clock::now();
        cert64 = certify(k64, standard_tuning(k64, 0.0), kThreshold, default_control());
        return certify_outcome(*cert64, seconds_since(start), kCertifySeconds64);
    });

    report(3, "change-matrix row sums", [] {
        std::mt19937_64 gen(2024);
        double worst = 0.0;
        for (PaletteConfig cfg : {k43, k64}) {
            for (int k = 0; k < kRowSumDraws; ++k) {
                const auto z = random_subcritical(cfg, gen);
                const auto m = delta_matrix(z);
                for (std::size_t s = 0; s < m.size(); ++s) {
                    worst = std::max(worst, std::abs(m.row_sum(s) + expected_cascade_size(z, m.space().at(s))));
                }
            }
        }
        return Outcome{worst <= kRowSumTol, "max |row sum + E size| = " + fmt(worst, 3) + " over " +
                                                std::to_string(2 * kRowSumDraws) + " distributions"};
    });

    report(4, "initial growth rates", [] {
        bool ok = true;
        std::string detail;
        for (PaletteConfig cfg : {k43, k64}) {
            const auto z = initial_distribution(cfg);
            const double g = cascade_growth(z);
            const double m = remainder_growth(z);
            ok = ok && g == 0.0 && m == static_cast<double>(cfg.r - 1);
            detail += "(" + std::to_string(cfg.r) + "," + std::to_string(cfg.p) + "): g=" + fmt(g) + " m=" + fmt(m) +
                      "; ";
        }
        return Outcome{ok, detail};
    });

    report(5, "Euler order", [] {
        IntegrationControl control;
        control.step = 1e-3;
        const auto coarse = euler_ode_compare(k43, standard_tuning(k43, 0.0), kEulerEpsilon, control, kThreshold);
        const auto fine = euler_ode_compare(k43, standard_tuning(k43, 0.0), kEulerEpsilon / 2, control, kThreshold);
        if (!coarse.ok || !fine.ok || fine.distance <= 0.0) {
            return Outcome{false, "comparison failed: " + coarse.message + " " + fine.message};
        }
        const double ratio = coarse.distance / fine.distance;
        return Outcome{ratio >= kEulerRatioLo && ratio <= kEulerRatioHi,
                       "err(" + fmt(kEulerEpsilon) + ")=" + fmt(coarse.distance) + " err(" + fmt(kEulerEpsilon / 2) +
                           ")=" + fmt(fine.distance) + " ratio=" + fmt(ratio)};
    });

    report(6, "trajectory tracking (4,3)", [&] {
        if (!cert43 || !cert43->certified()) {
            return Outcome{false, "no (4,3) certificate"};
        }
        const long steps = steps_for_time(*cert43->R, kTrajectoryEpsilon);
        double worst = 0.0;
        std::string detail = "per-seed sup distance:";
        for (int seed = 1; seed <= kTrajectorySeeds; ++seed) {
            auto config = base_config(k43, kTrajectoryN, kTrajectoryEpsilon, static_cast<std::uint64_t>(seed), steps);
            config.finish = false;
            const auto result = simulate(config);
            const double d = trajectory_distance(result.stats, *cert43);
            worst = std::max(worst, d);
            detail += " " + fmt(d, 3);
        }
        return Outcome{worst <= kTrajectoryTol, detail + " (tol " + fmt(kTrajectoryTol) + ")"};
    });

    // Criteria 7 and 8 share one mid-run state at half the stopping time.
    std::optional<ColoringState> mid;
    auto mid_state = [&]() -> ColoringState& {
        if (!mid) {
            const double x = cert43 && cert43->R ? *cert43->R / 2 : 5.0;
            mid.emplace(std::make_shared<const Graph>(gen_regular_graph(static_cast<int>(kLawN), k43.r, 77)), k43);
            run_phase1(*mid, standard_tuning(k43, kLawEpsilon), steps_for_time(x, kLawEpsilon), CounterRng(77));
        }
        return *mid;
    };

    report(7, "neighbor type law", [&] {
        const auto law = neighbor_type_law(mid_state(), kLawSamples, CounterRng(78));
        return Outcome{law.tv <= kNeighborTvTol,
                       "TV=" + fmt(law.tv, 3) + " over " + std::to_string(law.samples) + " samples"};
    });

    report(8, "cascade law", [&] {
        const auto law = cascade_law(mid_state(), kLawSamples, CounterRng(79));
        const auto fit = cascade_tail_fit(law.histogram);
        const double rel = std::abs(law.mean_size - law.closed_form_mean) / law.closed_form_mean;
        const bool slope_ok = fit.slope && *fit.slope < 0.0;
        return Outcome{rel <= kCascadeMeanRel && slope_ok && law.gen1_tv <= kGen1TvTol,
                       "mean=" + fmt(law.mean_size) + " predicted=" + fmt(law.closed_form_mean) +
                           " rel=" + fmt(rel, 3) + " slope=" + (fit.slope ? fmt(*fit.slope, 3) : "none") +
                           " gen1 TV=" + fmt(law.gen1_tv, 3)};
    });
    mid.reset();

    report(9, "uncolored component law", [] {
        auto config = base_config(k43, kComponentN, kComponentEpsilon, 91,
                                  steps_for_time(kComponentTime, kComponentEpsilon));
        config.finish = false;
        const auto result = simulate(config);
        const double m = remainder_growth(result.phase1_z);
        if (m >= 1.0) {
            return Outcome{false, "remainder growth " + fmt(m) + " is not subcritical"};
        }
        const double predicted = 1.0 / (1.0 - m);
        const double measured = result.phase1_components.mean_branch_size;
        const double rel = std::abs(measured - predicted) / predicted;
        return Outcome{rel <= kComponentRel, "x=" + fmt(kComponentTime) + " m=" + fmt(m) + " mean branch size=" +
                                                 fmt(measured) + " predicted=" + fmt(predicted) + " rel=" +
                                                 fmt(rel, 3)};
    });

    report(10, "red fraction scaling", [&] {
        if (!cert43 || !cert43->certified()) {
            return Outcome{false, "no (4,3) certificate"};
        }
        std::vector<std::pair<double, double>> results;
        for (double eps : {0.04, 0.02, 0.01}) {
            for (int seed = 1; seed <= kRedSeeds; ++seed) {
                auto config =
                    base_config(k43, kRedN, eps, static_cast<std::uint64_t>(100 + seed), steps_for_time(*cert43->R, eps));
                config.finish = false;
                results.emplace_back(eps, simulate(config).stats.phase1_red_frac);
            }
        }
        const auto scaling = red_scaling(results);
        bool ok = !scaling.degenerate && scaling.halving_ratios.size() == 2;
        std::string detail = "red:";
        for (const auto& g : scaling.groups) {
            detail += " " + fmt(g.epsilon) + "->" + fmt(g.mean_red, 3);
        }
        detail += " halving ratios:";
        for (const auto& [eps, ratio] : scaling.halving_ratios) {
            ok = ok && ratio >= kHalvingLo && ratio <= kHalvingHi;
            detail += " " + fmt(ratio, 3);
        }
        if (scaling.slope) {
            detail += " slope=" + fmt(*scaling.slope, 3);
        }
        return Outcome{ok, detail};
    });

    report(11, "end-to-end (4,3)", [&] {
        if (!cert43 || !cert43->certified()) {
            return Outcome{false, "no (4,3) certificate"};
        }
        const auto config = base_config(k43, kEndToEndN, kEndToEndEpsilon43, 11,
                                        steps_for_time(*cert43->R, kEndToEndEpsilon43));
        const auto result = simulate(config);
        const bool proper = result.violations.empty() && result.state->red_count() == 0 &&
                            result.state->uncolored_count() == 0;
        return Outcome{proper && result.stats.final_extra_frac <= kExtraTol,
                       std::string(proper ? "proper" : "not proper") + " phase-1 red=" +
                           fmt(result.stats.phase1_red_frac, 3) + " extra=" + fmt(result.stats.final_extra_frac, 3)};
    });

    report(12, "end-to-end (6,4) with buffer rounds", [&] {
        if (!cert64 || !cert64->certified()) {
            return Outcome{false, "no (6,4) certificate"};
        }
        bool proper = true;
        long early = 0;
        long late = 0;
        double worst_extra = 0.0;
        for (int seed = 1; seed <= kEndToEndSeeds64; ++seed) {
            auto config = base_config(k64, kEndToEndN, kEndToEndEpsilon64, static_cast<std::uint64_t>(seed),
                                      steps_for_time(*cert64->R, kEndToEndEpsilon64));
            config.modified = true;
            const auto result = simulate(config);
            proper = proper && result.violations.empty() && result.state->red_count() == 0 &&
                     result.state->uncolored_count() == 0;
            worst_extra = std::max(worst_extra, result.stats.final_extra_frac);
            const auto& activity = result.stats.buffer.activity_by_round;
            for (std::size_t j = 1; j < activity.size(); ++j) {
                (j == 1 ? early : late) += activity[j];
            }
        }
        const long total = early + late;
        const double share = total > 0 ? static_cast<double>(late) / static_cast<double>(total) : 0.0;
        const bool ok = proper && worst_extra <= kExtraTol && share < kLateRoundShare;
        return Outcome{ok, std::string(proper ? "proper" : "not proper") + " max extra=" +
                               fmt(worst_extra, 3) + " buffer activity round1=" + std::to_string(early) +
                               " rounds>=2=" + std::to_string(late) + " share=" + fmt(share, 3)};
    });

    long unexpected = 0;
    for (int id : failed) {
        unexpected += std::find(known.begin(), known.end(), id) == known.end();
    }
    std::cout << failed.size() << " of 12 criteria failed";
    if (!failed.empty()) {
        std::cout << " (" << failed.size() - static_cast<std::size_t>(unexpected) << " listed as known)";
    }
    std::cout << std::endl;
    return unexpected == 0 ? 0 : 1;
}
