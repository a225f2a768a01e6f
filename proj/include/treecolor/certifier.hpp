#pragma once

// Fixed-step integration of the type dynamics and subcriticality
// certification along the integrated trajectory.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "treecolor/types.hpp"

namespace treecolor {

enum class Method { euler, rk4 };

std::string to_string(Method m);
/// Throws ConfigurationError for anything but "euler" / "rk4".
Method method_from_string(const std::string& s);

struct IntegrationControl {
    Method method = Method::rk4;
    double step = 1e-3;
    double max_time = 400.0;
    int sample_stride = 1;
    /// Number of step halvings run by certify on top of the base step.
    int halvings = 2;
};

/// Throws ConfigurationError unless 0 < step <= 0.1, max_time is finite and
/// positive, sample_stride >= 1 and halvings >= 0.
void validate(const IntegrationControl& control);

/// Sampled solution of dz/dx = drift(z) starting from all mass on (r, p).
struct Trajectory {
    PaletteConfig cfg;
    std::vector<double> times;
    /// Row-major, one row of |T| entries per sample.
    std::vector<double> state_values;
    std::vector<double> g_values;
    std::vector<double> remainder_values;
    /// Largest g over every integration step since the previous sample. May
    /// be left empty, in which case g_values stands in.
    std::vector<double> step_max_g;

    bool aborted = false;
    double abort_time = 0.0;
    std::string abort_reason;
    /// Integration steps where an entry fell below -1e-9 and was clamped.
    long clamped_steps = 0;

    std::size_t size() const { return times.size(); }
    TypeDistribution state(std::size_t i) const;
    /// Largest g monitored in (previous sample, sample i].
    double max_g_at(std::size_t i) const { return step_max_g.empty() ? g_values[i] : step_max_g[i]; }
    void push(double time, const TypeDistribution& z, double g, double remainder, double max_g);
};

/// g at z, or 0 when no mass remains on positive degrees (no edges left).
double growth_or_zero(const TypeDistribution& z);
/// Remainder growth at z, or 0 when no mass remains on positive degrees.
double remainder_or_zero(const TypeDistribution& z);

/// Integrate from the initial distribution until max_time, until g reaches
/// 1 - 1e-6 (recorded as an abort, not thrown), or, when stop_below is set,
/// until a sample has remainder growth below it.
Trajectory integrate(const PaletteConfig& cfg, const TuningParams& tuning, const IntegrationControl& control,
                     std::optional<double> stop_below = std::nullopt);

struct StoppingTime {
    std::optional<double> R;
    std::size_t index = 0;
    /// Time of the first g >= threshold sample when R was not found.
    std::optional<double> violation_time;
    std::string reason;

    bool found() const { return R.has_value(); }
};

/// Smallest sample time whose remainder growth is below threshold, provided g
/// stays below threshold at every sample up to and including it.
StoppingTime find_R(const Trajectory& traj, double threshold = 0.99999);

/// Outcome of one integration at a given step.
struct Refinement {
    double step = 0.0;
    std::optional<double> R;
    double max_g_on_0_R = 0.0;
    double remainder_growth_at_R = 0.0;
    std::string note;
};

struct CertificateSample {
    double time = 0.0;
    TypeDistribution z;
    double g = 0.0;
    double remainder_growth = 0.0;
};

struct Certificate {
    int schema_version = 1;
    PaletteConfig cfg;
    TuningParams tuning;
    IntegrationControl control;
    double threshold = 0.99999;
    std::string status;  // "certified" or "failed"
    std::optional<double> R;
    double max_g_on_0_R = 0.0;
    double remainder_growth_at_R = 0.0;
    double margin_g = 0.0;
    double margin_remainder = 0.0;
    std::vector<Refinement> refinements;
    std::vector<std::string> diagnostics;
    /// Base-step trajectory on [0, R] (or up to the failure), thinned to at
    /// most max_stored_samples entries; the last sample always sits at R.
    std::vector<CertificateSample> samples;
    std::string created_by;

    bool certified() const { return status == "certified"; }
};

inline constexpr std::size_t max_stored_samples = 2000;

/// Integrate at control.step and at control.halvings successive halvings;
/// certified iff every run finds R with both margins positive and successive
/// R values agree to within 1% relative.
Certificate certify(const PaletteConfig& cfg, const TuningParams& tuning, double threshold,
                    const IntegrationControl& control);

/// Throws VerificationError when the stored numbers do not reproduce.
void verify_certificate(const Certificate& cert);

/// Linear interpolation of the stored trajectory at time x (clamped to the
/// stored range).
TypeDistribution interpolate(const Certificate& cert, double x);

struct EulerComparison {
    bool ok = false;
    double distance = 0.0;
    double horizon = 0.0;
    std::string message;
};

/// Sup over n*epsilon <= R of the max-norm distance between the Euler
/// sequence with step epsilon and an rk4 reference with step <= epsilon/10.
/// R comes from the reference run; without one the horizon is control.max_time.
EulerComparison euler_ode_compare(const PaletteConfig& cfg, const TuningParams& tuning, double epsilon,
                                  const IntegrationControl& control, double threshold = 0.99999);

} // namespace treecolor
