#include "treecolor/certifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "treecolor/dynamics.hpp"
#include "treecolor/errors.hpp"

namespace treecolor {

namespace {

constexpr double abort_growth = 1.0 - 1e-6;

bool has_edges(const TypeDistribution& z) {
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (z.space().at(i).d > 0 && z[i] > 0.0) {
            return true;
        }
    }
    return false;
}

void axpy(std::vector<double>& out, const std::vector<double>& base, double a, const std::vector<double>& x) {
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = base[i] + a * x[i];
    }
}

// One fixed step. Returns the number of entries clamped below -1e-9.
int advance(TypeDistribution& z, const TuningParams& tuning, Method method, double h) {
    std::vector<double> next(z.size());
    if (method == Method::euler) {
        const TypeVector k1 = drift(z, tuning);
        axpy(next, z.values(), h, k1.values());
    } else {
        TypeDistribution stage{z.space()};
        const TypeVector k1 = drift(z, tuning);
        axpy(stage.values(), z.values(), h / 2, k1.values());
        const TypeVector k2 = drift(stage, tuning);
        axpy(stage.values(), z.values(), h / 2, k2.values());
        const TypeVector k3 = drift(stage, tuning);
        axpy(stage.values(), z.values(), h, k3.values());
        const TypeVector k4 = drift(stage, tuning);
        for (std::size_t i = 0; i < next.size(); ++i) {
            next[i] = z[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    int clamped = 0;
    for (std::size_t i = 0; i < next.size(); ++i) {
        if (next[i] < 0.0) {
            clamped += next[i] < -1e-9 ? 1 : 0;
            next[i] = 0.0;
        }
    }
    z.values() = std::move(next);
    return clamped;
}

double relative_gap(double a, double b) { return std::abs(a - b) / std::abs(a); }

} // namespace

std::string to_string(Method m) { return m == Method::euler ? "euler" : "rk4"; }

Method method_from_string(const std::string& s) {
    if (s == "euler") {
        return Method::euler;
    }
    if (s == "rk4") {
        return Method::rk4;
    }
    throw ConfigurationError("unknown integration method '" + s + "' (expected euler or rk4)");
}

void validate(const IntegrationControl& control) {
    if (!(control.step > 0.0) || control.step > 0.1) {
        throw ConfigurationError("integration step must lie in (0, 0.1]");
    }
    if (!(control.max_time > 0.0) || !std::isfinite(control.max_time)) {
        throw ConfigurationError("max_time must be positive and finite");
    }
    if (control.sample_stride < 1) {
        throw ConfigurationError("sample_stride must be >= 1");
    }
    if (control.halvings < 0) {
        throw ConfigurationError("halvings must be >= 0");
    }
}

TypeDistribution Trajectory::state(std::size_t i) const {
    const TypeSpace space(cfg);
    const auto first = state_values.begin() + static_cast<std::ptrdiff_t>(i * space.size());
    return TypeDistribution(space, std::vector<double>(first, first + static_cast<std::ptrdiff_t>(space.size())));
}

void Trajectory::push(double time, const TypeDistribution& z, double g, double remainder, double max_g) {
    times.push_back(time);
    state_values.insert(state_values.end(), z.values().begin(), z.values().end());
    g_values.push_back(g);
    remainder_values.push_back(remainder);
    step_max_g.push_back(max_g);
}

double growth_or_zero(const TypeDistribution& z) { return has_edges(z) ? cascade_growth(z) : 0.0; }

double remainder_or_zero(const TypeDistribution& z) { return has_edges(z) ? remainder_growth(z) : 0.0; }

Trajectory integrate(const PaletteConfig& cfg, const TuningParams& tuning, const IntegrationControl& control,
                     std::optional<double> stop_below) {
    validate(cfg);
    validate(control);
    if (!(tuning.weights.space() == TypeSpace(cfg))) {
        throw ConfigurationError("tuning weights do not match (r, p)");
    }
    for (double w : tuning.weights.values()) {
        if (!(w >= 0.0)) {
            throw ConfigurationError("activation weights must be nonnegative");
        }
    }

    Trajectory traj;
    traj.cfg = cfg;
    TypeDistribution z = initial_distribution(cfg);
    const double g0 = growth_or_zero(z);
    traj.push(0.0, z, g0, remainder_or_zero(z), g0);

    const auto total_steps = static_cast<long>(std::floor(control.max_time / control.step + 1e-9));
    double window_max_g = -std::numeric_limits<double>::infinity();
    for (long k = 1; k <= total_steps; ++k) {
        const double x = static_cast<double>(k) * control.step;
        double g = 0.0;
        try {
            if (advance(z, tuning, control.method, control.step) > 0) {
                ++traj.clamped_steps;
            }
            g = growth_or_zero(z);
        } catch (const SupercriticalError& e) {
            traj.aborted = true;
            traj.abort_time = x;
            traj.abort_reason = e.what();
            break;
        }
        if (g >= abort_growth) {
            std::ostringstream msg;
            msg << "cascade growth reached " << g << " >= 1 - 1e-6";
            traj.aborted = true;
            traj.abort_time = x;
            traj.abort_reason = msg.str();
            break;
        }
        window_max_g = std::max(window_max_g, g);
        if (k % control.sample_stride == 0 || k == total_steps) {
            const double rem = remainder_or_zero(z);
            traj.push(x, z, g, rem, window_max_g);
            window_max_g = -std::numeric_limits<double>::infinity();
            if (stop_below && rem < *stop_below) {
                break;
            }
        }
    }
    return traj;
}

StoppingTime find_R(const Trajectory& traj, double threshold) {
    if (traj.size() == 0) {
        throw PreconditionError("find_R needs a nonempty trajectory");
    }
    if (!(threshold > 0.0) || threshold > 1.0) {
        throw ConfigurationError("threshold must lie in (0, 1]");
    }
    StoppingTime out;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const double g = std::max(traj.g_values[i], traj.max_g_at(i));
        if (!(g < threshold)) {
            std::ostringstream msg;
            msg << "cascade growth " << g << " >= threshold " << threshold << " at x = " << traj.times[i]
                << " before remainder growth dropped below threshold";
            out.violation_time = traj.times[i];
            out.index = i;
            out.reason = msg.str();
            return out;
        }
        if (traj.remainder_values[i] < threshold) {
            out.R = traj.times[i];
            out.index = i;
            return out;
        }
    }
    std::ostringstream msg;
    msg << "remainder growth stayed >= threshold " << threshold << " through x = " << traj.times.back();
    if (traj.aborted) {
        msg << " (integration aborted at x = " << traj.abort_time << ": " << traj.abort_reason << ")";
    }
    out.index = traj.size() - 1;
    out.reason = msg.str();
    return out;
}

Certificate certify(const PaletteConfig& cfg, const TuningParams& tuning, double threshold,
                    const IntegrationControl& control) {
    validate(cfg);
    validate(control);
    if (!(threshold > 0.0) || threshold > 1.0) {
        throw ConfigurationError("threshold must lie in (0, 1]");
    }
    if (!(tuning.weights.space() == TypeSpace(cfg))) {
        throw ConfigurationError("tuning weights do not match (r, p)");
    }

    Certificate cert;
    cert.cfg = cfg;
    cert.tuning = tuning;
    cert.control = control;
    cert.threshold = threshold;
    cert.created_by = "treecolor certify";

    bool ok = true;
    Trajectory base;
    StoppingTime base_stop;
    for (int k = 0; k <= control.halvings; ++k) {
        IntegrationControl refined = control;
        refined.step = std::ldexp(control.step, -k);
        Trajectory traj = integrate(cfg, tuning, refined, threshold);
        const StoppingTime stop = find_R(traj, threshold);

        Refinement ref;
        ref.step = refined.step;
        if (stop.found()) {
            ref.R = stop.R;
            double max_g = 0.0;
            for (std::size_t i = 0; i <= stop.index; ++i) {
                max_g = std::max({max_g, traj.g_values[i], traj.max_g_at(i)});
            }
            ref.max_g_on_0_R = max_g;
            ref.remainder_growth_at_R = traj.remainder_values[stop.index];
            if (!(max_g < threshold) || !(ref.remainder_growth_at_R < threshold)) {
                ok = false;
                ref.note = "margin not positive";
            }
        } else {
            ok = false;
            ref.note = stop.reason;
            cert.diagnostics.push_back("step " + std::to_string(refined.step) + ": " + stop.reason);
        }
        if (traj.clamped_steps > 0) {
            cert.diagnostics.push_back("step " + std::to_string(refined.step) + ": " +
                                       std::to_string(traj.clamped_steps) + " integration steps clamped negative entries");
        }
        if (k > 0 && ref.R && cert.refinements.back().R) {
            const double gap = relative_gap(*cert.refinements.back().R, *ref.R);
            if (!(gap < 0.01)) {
                ok = false;
                std::ostringstream msg;
                msg << "R moved by " << 100.0 * gap << "% between steps " << cert.refinements.back().step << " and "
                    << ref.step;
                cert.diagnostics.push_back(msg.str());
            }
        }
        cert.refinements.push_back(ref);
        if (k == 0) {
            base = std::move(traj);
            base_stop = stop;
        }
    }

    const Refinement& head = cert.refinements.front();
    cert.R = head.R;
    if (head.R) {
        cert.max_g_on_0_R = head.max_g_on_0_R;
        cert.remainder_growth_at_R = head.remainder_growth_at_R;
    } else {
        double max_g = 0.0;
        for (std::size_t i = 0; i <= base_stop.index; ++i) {
            max_g = std::max({max_g, base.g_values[i], base.max_g_at(i)});
        }
        cert.max_g_on_0_R = max_g;
        cert.remainder_growth_at_R = base.remainder_values[base_stop.index];
        if (cert.max_g_on_0_R >= threshold) {
            cert.diagnostics.push_back("binding constraint: cascade growth reached the threshold first");
        } else {
            cert.diagnostics.push_back("binding constraint: remainder growth never dropped below the threshold");
        }
    }
    cert.margin_g = threshold - cert.max_g_on_0_R;
    cert.margin_remainder = threshold - cert.remainder_growth_at_R;
    cert.status = ok ? "certified" : "failed";

    const std::size_t last = base_stop.index;
    const std::size_t stride = std::max<std::size_t>(1, (last + max_stored_samples - 2) / (max_stored_samples - 1));
    for (std::size_t i = 0; i <= last; ++i) {
        if (i % stride == 0 || i == last) {
            cert.samples.push_back({base.times[i], base.state(i), base.g_values[i], base.remainder_values[i]});
        }
    }
    return cert;
}

void verify_certificate(const Certificate& cert) {
    validate(cert.cfg);
    const TypeSpace space(cert.cfg);
    if (cert.samples.empty()) {
        throw VerificationError("certificate holds no trajectory samples");
    }
    if (!(cert.tuning.weights.space() == space)) {
        throw VerificationError("tuning weights do not match (r, p)");
    }
    const TypeDistribution start = initial_distribution(cert.cfg);
    if (cert.samples.front().time != 0.0 || !(cert.samples.front().z == start)) {
        throw VerificationError("first sample is not the initial distribution at x = 0");
    }
    double max_g = 0.0;
    double previous_time = -1.0;
    for (const auto& s : cert.samples) {
        if (!(s.z.space() == space)) {
            throw VerificationError("sample has the wrong type space");
        }
        if (!(s.time > previous_time)) {
            throw VerificationError("sample times are not increasing");
        }
        previous_time = s.time;
        const double g = growth_or_zero(s.z);
        const double rem = remainder_or_zero(s.z);
        if (std::abs(g - s.g) > 1e-9) {
            std::ostringstream msg;
            msg << "stored g " << s.g << " at x = " << s.time << " does not match recomputed " << g;
            throw VerificationError(msg.str());
        }
        if (std::abs(rem - s.remainder_growth) > 1e-9) {
            std::ostringstream msg;
            msg << "stored remainder growth " << s.remainder_growth << " at x = " << s.time
                << " does not match recomputed " << rem;
            throw VerificationError(msg.str());
        }
        max_g = std::max(max_g, g);
    }
    if (max_g > cert.max_g_on_0_R + 1e-9) {
        std::ostringstream msg;
        msg << "stored max_g_on_0_R " << cert.max_g_on_0_R << " is below the sampled maximum " << max_g;
        throw VerificationError(msg.str());
    }
    if (std::abs(cert.samples.back().remainder_growth - cert.remainder_growth_at_R) > 1e-9) {
        throw VerificationError("remainder_growth_at_R does not match the final sample");
    }
    if (std::abs(cert.margin_g - (cert.threshold - cert.max_g_on_0_R)) > 1e-12 ||
        std::abs(cert.margin_remainder - (cert.threshold - cert.remainder_growth_at_R)) > 1e-12) {
        throw VerificationError("margins do not equal threshold minus the stored maxima");
    }
    if (cert.certified()) {
        if (!cert.R) {
            throw VerificationError("certified certificate has no R");
        }
        if (std::abs(cert.samples.back().time - *cert.R) > 1e-12) {
            throw VerificationError("final sample is not at R");
        }
        if (!(cert.max_g_on_0_R < cert.threshold) || !(cert.remainder_growth_at_R < cert.threshold)) {
            throw VerificationError("certified status without positive margins");
        }
    } else if (cert.status != "failed") {
        throw VerificationError("unknown certificate status '" + cert.status + "'");
    }
}

TypeDistribution interpolate(const Certificate& cert, double x) {
    const auto& s = cert.samples;
    if (s.empty()) {
        throw PreconditionError("certificate holds no samples");
    }
    if (x <= s.front().time) {
        return s.front().z;
    }
    if (x >= s.back().time) {
        return s.back().z;
    }
    const auto hi = std::upper_bound(s.begin(), s.end(), x,
                                     [](double value, const CertificateSample& c) { return value < c.time; });
    const auto lo = hi - 1;
    const double w = (x - lo->time) / (hi->time - lo->time);
    TypeDistribution out{lo->z.space()};
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = (1.0 - w) * lo->z[i] + w * hi->z[i];
    }
    return out;
}

EulerComparison euler_ode_compare(const PaletteConfig& cfg, const TuningParams& tuning, double epsilon,
                                  const IntegrationControl& control, double threshold) {
    IntegrationControl euler = control;
    euler.method = Method::euler;
    euler.step = epsilon;
    euler.sample_stride = 1;
    validate(euler);

    const auto substeps = std::max<long>(10, static_cast<long>(std::ceil(epsilon / control.step - 1e-9)));
    IntegrationControl reference = control;
    reference.method = Method::rk4;
    reference.step = epsilon / static_cast<double>(substeps);
    reference.sample_stride = static_cast<int>(substeps);
    validate(reference);

    EulerComparison out;
    const Trajectory ref = integrate(cfg, tuning, reference, threshold);
    const StoppingTime stop = find_R(ref, threshold);
    if (stop.violation_time) {
        out.message = "reference run: " + stop.reason;
        return out;
    }
    out.horizon = stop.found() ? *stop.R : control.max_time;

    IntegrationControl euler_run = euler;
    euler_run.max_time = out.horizon + 0.5 * epsilon;
    const Trajectory approx = integrate(cfg, tuning, euler_run);
    const auto steps = static_cast<std::size_t>(std::floor(out.horizon / epsilon + 1e-9));
    if (approx.size() < steps + 1) {
        out.message = "euler run stopped at x = " + std::to_string(approx.times.back()) +
                      (approx.aborted ? ": " + approx.abort_reason : std::string());
        return out;
    }
    if (ref.size() < steps + 1) {
        out.message = "reference run stopped early" + (ref.aborted ? ": " + ref.abort_reason : std::string());
        return out;
    }
    const std::size_t width = TypeSpace(cfg).size();
    for (std::size_t n = 0; n <= steps; ++n) {
        for (std::size_t i = 0; i < width; ++i) {
            out.distance = std::max(out.distance, std::abs(approx.state_values[n * width + i] -
                                                           ref.state_values[n * width + i]));
        }
    }
    out.ok = true;
    return out;
}

} // namespace treecolor
