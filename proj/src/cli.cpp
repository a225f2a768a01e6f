#include "treecolor/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "treecolor/certificate.hpp"
#include "treecolor/errors.hpp"
#include "treecolor/io.hpp"
#include "treecolor/simulation.hpp"

namespace treecolor {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return "";
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

/// Replaces "--config FILE" by the file's settings, placed right after the
/// subcommand so that explicit flags (which come later) take precedence.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
    std::vector<std::string> rest;
    std::vector<std::string> from_file;
    std::optional<std::string> path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (a == "--config") {
            if (i + 1 >= args.size()) {
                throw ConfigurationError("--config needs a file name");
            }
            path = args[++i];
        } else if (a.rfind("--config=", 0) == 0) {
            path = a.substr(9);
        } else {
            rest.push_back(a);
        }
    }
    if (!path) {
        return rest;
    }
    std::ifstream in(*path);
    if (!in) {
        throw ConfigurationError("cannot read config file '" + *path + "'");
    }
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty() || line[0] == '#') {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigurationError("config file line " + std::to_string(line_no) + " is not key=value");
        }
        std::string key = trim(line.substr(0, eq));
        std::replace(key.begin(), key.end(), '_', '-');
        if (key.empty() || key == "config") {
            throw ConfigurationError("config file line " + std::to_string(line_no) + " has an invalid key");
        }
        from_file.push_back("--" + key + "=" + trim(line.substr(eq + 1)));
    }
    std::vector<std::string> out;
    if (!rest.empty()) {
        out.push_back(rest.front());
    }
    out.insert(out.end(), from_file.begin(), from_file.end());
    if (rest.size() > 1) {
        out.insert(out.end(), rest.begin() + 1, rest.end());
    }
    return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) {
        item = trim(item);
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

double parse_double(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) {
            throw std::invalid_argument(s);
        }
        return v;
    } catch (const std::logic_error&) {
        throw ConfigurationError(what + ": '" + s + "' is not a number");
    }
}

std::uint64_t parse_seed(const std::string& s) {
    try {
        std::size_t used = 0;
        const auto v = std::stoull(s, &used);
        if (used != s.size()) {
            throw std::invalid_argument(s);
        }
        return v;
    } catch (const std::logic_error&) {
        throw ConfigurationError("seed '" + s + "' is not a nonnegative integer");
    }
}

/// Standard weights with "d,c:w;..." overrides applied.
TuningParams make_tuning(const PaletteConfig& cfg, double epsilon, const std::string& overrides) {
    TuningParams tuning = standard_tuning(cfg, epsilon);
    for (const auto& item : split(overrides, ';')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) {
            throw ConfigurationError("weight override '" + item + "' is not d,c:value");
        }
        VertexType t;
        try {
            t = type_from_key(trim(item.substr(0, colon)));
        } catch (const ParseError& e) {
            throw ConfigurationError(e.what());
        }
        if (!TypeSpace(cfg).contains(t)) {
            throw ConfigurationError("weight override for (" + to_key(t) + ") is outside the type space");
        }
        tuning.weights.at(t) = parse_double(trim(item.substr(colon + 1)), "weight");
    }
    validate(tuning);
    return tuning;
}

struct ControlOptions {
    std::string method = "rk4";
    double step = 1e-3;
    double max_time = 400.0;
    int sample_stride = 1;
    int halvings = 2;

    void add(CLI::App* app) {
        app->add_option("--method", method, "Integrator: rk4 or euler")->capture_default_str();
        app->add_option("--step", step, "Integration step")->capture_default_str();
        app->add_option("--max-time", max_time, "Integration horizon")->capture_default_str();
        app->add_option("--sample-stride", sample_stride, "Steps between stored samples")->capture_default_str();
        app->add_option("--halvings", halvings, "Step halvings in the convergence study")->capture_default_str();
    }

    IntegrationControl resolve() const {
        IntegrationControl c;
        c.method = method_from_string(method);
        c.step = step;
        c.max_time = max_time;
        c.sample_stride = sample_stride;
        c.halvings = halvings;
        validate(c);
        return c;
    }
};

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw ConfigurationError("cannot write '" + path + "'");
    }
    f << text;
    if (!f) {
        throw ConfigurationError("failed while writing '" + path + "'");
    }
}

PaletteConfig palette(int r, int p) {
    PaletteConfig cfg{r, p};
    validate(cfg);
    return cfg;
}

int run_certify(int r, int p, double threshold, double epsilon, const std::string& weights,
                const ControlOptions& control_opts, const std::string& out_path, std::ostream& out) {
    const PaletteConfig cfg = palette(r, p);
    if (!(threshold > 0.0 && threshold <= 1.0)) {
        throw ConfigurationError("threshold must lie in (0, 1]");
    }
    const TuningParams tuning = make_tuning(cfg, epsilon, weights);
    const IntegrationControl control = control_opts.resolve();
    const Certificate cert = certify(cfg, tuning, threshold, control);
    if (!out_path.empty()) {
        write_certificate(cert, out_path);
    }
    out << std::setprecision(10);
    out << "status: " << cert.status << "\n";
    out << "r=" << r << " p=" << p << " threshold=" << threshold << " method=" << to_string(control.method)
        << " step=" << control.step << "\n";
    if (cert.R) {
        out << "R: " << *cert.R << "\n";
        out << "max g on [0,R]: " << cert.max_g_on_0_R << " (margin " << cert.margin_g << ")\n";
        out << "remainder growth at R: " << cert.remainder_growth_at_R << " (margin " << cert.margin_remainder
            << ")\n";
    }
    for (const auto& ref : cert.refinements) {
        out << "refinement step=" << ref.step << " R=";
        if (ref.R) {
            out << *ref.R;
        } else {
            out << "none";
        }
        out << " max_g=" << ref.max_g_on_0_R << (ref.note.empty() ? "" : " (" + ref.note + ")") << "\n";
    }
    for (const auto& d : cert.diagnostics) {
        out << "diagnostic: " << d << "\n";
    }
    if (!out_path.empty()) {
        out << "certificate written to " << out_path << "\n";
    }
    return cert.certified() ? exit_ok : exit_failed;
}

int run_integrate(int r, int p, double epsilon, const std::string& weights, const ControlOptions& control_opts,
                  const std::string& out_path, std::ostream& out) {
    const PaletteConfig cfg = palette(r, p);
    const TuningParams tuning = make_tuning(cfg, epsilon, weights);
    const IntegrationControl control = control_opts.resolve();
    const Trajectory traj = integrate(cfg, tuning, control);
    ConfigEntries config{{"mode", "integrate"},
                         {"r", std::to_string(r)},
                         {"p", std::to_string(p)},
                         {"weights", weights_to_string(tuning.weights)},
                         {"method", to_string(control.method)},
                         {"step", format_double(control.step)},
                         {"max_time", format_double(control.max_time)},
                         {"sample_stride", std::to_string(control.sample_stride)}};
    if (traj.aborted) {
        config.emplace_back("aborted_at", format_double(traj.abort_time));
    }
    std::ostringstream csv;
    write_trajectory_csv(csv, traj, config);
    if (out_path.empty()) {
        out << csv.str();
    } else {
        write_file(out_path, csv.str());
        out << traj.size() << " samples written to " << out_path << "\n";
    }
    return exit_ok;
}

struct SimulateOptions {
    int r = 4;
    int p = 3;
    double epsilon = 0.0;
    std::string weights;
    long n = 0;
    std::string graph = "random_regular";
    int radius = 0;
    std::string seed = "0";
    std::string graph_seed;
    long steps = -1;
    double time = -1.0;
    std::string cert;
    bool modified = false;
    bool full_checks = false;
    double extra_bound = 0.05;
    std::string stats_out;
    std::string summary_out;
    std::string dump_out;

    void add(CLI::App* app, bool sweep) {
        app->add_option("--r", r, "Regularity")->capture_default_str();
        app->add_option("--p", p, "Palette size")->capture_default_str();
        if (!sweep) {
            app->add_option("--epsilon", epsilon, "Step size epsilon")->required();
            app->add_option("--seed", seed, "Process seed")->capture_default_str();
            app->add_option("--steps", steps, "Number of steps");
            app->add_option("--stats-out", stats_out, "Stats CSV path");
            app->add_option("--summary-out", summary_out, "Summary JSON path");
            app->add_option("--dump-out", dump_out, "Final coloring dump path");
            app->add_option("--extra-bound", extra_bound, "Declared extra-color fraction bound")
                ->capture_default_str();
            app->add_flag("--full-checks", full_checks, "Whole-state invariant check after every step");
            app->add_option("--graph", graph, "random_regular or tree_ball")->capture_default_str();
            app->add_option("--radius", radius, "Tree ball radius");
        }
        app->add_option("--weights", weights, "Weight overrides 'd,c:w;...'");
        app->add_option("--n", n, "Vertex count");
        app->add_option("--graph-seed", graph_seed, "Graph seed (default: the process seed)");
        app->add_option("--time", time, "Run ceil(time / epsilon) steps");
        app->add_option("--cert", cert, "Certificate; its R sets the number of steps");
        app->add_flag("--modified", modified, "Buffer rounds after every step");
    }
};

/// Steps from --steps, --time or the certificate's R (in that order).
long resolve_steps(const SimulateOptions& o, double epsilon, const std::optional<Certificate>& cert) {
    if (o.steps >= 0) {
        return o.steps;
    }
    if (o.time >= 0.0) {
        return steps_for_time(o.time, epsilon);
    }
    if (cert) {
        if (!cert->R) {
            throw ConfigurationError("certificate has no stopping time R");
        }
        return steps_for_time(*cert->R, epsilon);
    }
    throw ConfigurationError("give --steps, --time or --cert");
}

std::optional<Certificate> load_matching_cert(const std::string& path, const PaletteConfig& cfg,
                                              const TuningParams& tuning) {
    if (path.empty()) {
        return std::nullopt;
    }
    Certificate cert;
    try {
        cert = read_certificate(path);
    } catch (const VerificationError& e) {
        throw ConfigurationError(std::string("certificate does not verify: ") + e.what());
    }
    if (cert.cfg.r != cfg.r || cert.cfg.p != cfg.p) {
        throw ConfigurationError("certificate (r, p) differs from the run's");
    }
    for (std::size_t i = 0; i < tuning.weights.size(); ++i) {
        if (std::abs(cert.tuning.weights[i] - tuning.weights[i]) > 1e-12 * std::max(1.0, tuning.weights[i])) {
            throw ConfigurationError("certificate weights differ from the run's");
        }
    }
    return cert;
}

SimulationConfig base_config(const SimulateOptions& o, double epsilon, std::uint64_t seed) {
    SimulationConfig c;
    c.cfg = palette(o.r, o.p);
    c.tuning = make_tuning(c.cfg, epsilon, o.weights);
    c.kind = graph_kind_from_string(o.graph);
    c.n = o.n;
    c.radius = o.radius;
    c.seed = seed;
    c.graph_seed = o.graph_seed.empty() ? seed : parse_seed(o.graph_seed);
    c.modified = o.modified;
    c.full_checks = o.full_checks;
    return c;
}

int run_simulate(const SimulateOptions& o, std::ostream& out) {
    SimulationConfig config = base_config(o, o.epsilon, parse_seed(o.seed));
    if (config.kind == GraphKind::tree_ball) {
        config.n = 0;
    }
    const auto cert = load_matching_cert(o.cert, config.cfg, config.tuning);
    config.steps = resolve_steps(o, o.epsilon, cert);
    validate(config);
    if (!(o.extra_bound >= 0.0 && o.extra_bound <= 1.0)) {
        throw ConfigurationError("extra bound must lie in [0, 1]");
    }

    const SimulationResult result = simulate(config);
    ConfigEntries entries = describe(config);
    entries.insert(entries.begin(), {"mode", "simulate"});
    if (!o.cert.empty()) {
        entries.emplace_back("cert", o.cert);
    }
    entries.emplace_back("extra_bound", format_double(o.extra_bound));

    if (!o.stats_out.empty()) {
        std::ostringstream csv;
        write_stats_csv(csv, result.stats, entries);
        write_file(o.stats_out, csv.str());
    }
    if (!o.summary_out.empty()) {
        write_file(o.summary_out, summary_json(result.stats, entries));
    }
    if (!o.dump_out.empty()) {
        std::ostringstream dump;
        write_coloring_dump(dump, *result.state, entries);
        write_file(o.dump_out, dump.str());
    }
    const auto& s = result.stats;
    out << std::setprecision(6);
    out << "steps: " << config.steps << " (time " << static_cast<double>(config.steps) * o.epsilon << ")\n";
    out << "vertices: " << result.state->size() << "\n";
    out << "phase-1 red fraction: " << s.phase1_red_frac << "\n";
    out << "phase-1 uncolored components: " << result.phase1_components.count
        << " (mean size " << result.phase1_components.mean_size << ", max " << result.phase1_components.max_size
        << ")\n";
    out << "completion failures: " << s.completion_failures << ", tidy failures: " << s.tidy_failures << "\n";
    out << "final extra fraction: " << s.final_extra_frac << ", final red fraction: " << s.final_red_frac << "\n";
    out << "violations: " << s.violations << "\n";
    if (config.modified) {
        out << "buffer rounds activity:";
        for (std::size_t j = 1; j < s.buffer.activity_by_round.size(); ++j) {
            out << " " << s.buffer.activity_by_round[j];
        }
        out << " (budget failures " << s.buffer.budget_failures << ")\n";
    }
    const bool ok = s.violations == 0 && result.state->red_count() == 0 && result.state->uncolored_count() == 0;
    return ok ? exit_ok : exit_failed;
}

int run_sweep(const SimulateOptions& o, const std::string& epsilons_arg, const std::string& seeds_arg, int threads,
              const std::string& out_path, std::ostream& out) {
    std::vector<double> epsilons;
    for (const auto& e : split(epsilons_arg, ',')) {
        epsilons.push_back(parse_double(e, "epsilon"));
    }
    std::vector<std::uint64_t> seeds;
    for (const auto& s : split(seeds_arg, ',')) {
        seeds.push_back(parse_seed(s));
    }
    if (epsilons.empty() || seeds.empty()) {
        throw ConfigurationError("sweep needs at least one epsilon and one seed");
    }
    std::sort(epsilons.begin(), epsilons.end());
    epsilons.erase(std::unique(epsilons.begin(), epsilons.end()), epsilons.end());
    std::sort(seeds.begin(), seeds.end());
    seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());

    struct Cell {
        double epsilon;
        std::uint64_t seed;
        SimulationConfig config;
        double red = 0.0;
        std::string error;
        bool internal = false;
    };
    std::vector<Cell> cells;
    std::optional<Certificate> cert;
    for (double eps : epsilons) {
        if (!(eps > 0.0)) {
            throw ConfigurationError("sweep epsilons must be positive");
        }
        for (auto seed : seeds) {
            SimulationConfig c = base_config(o, eps, seed);
            if (c.kind != GraphKind::random_regular) {
                throw ConfigurationError("sweep runs on random regular graphs");
            }
            if (!cert) {
                cert = load_matching_cert(o.cert, c.cfg, c.tuning);
            }
            c.steps = resolve_steps(o, eps, cert);
            c.finish = false;
            validate(c);
            cells.push_back(Cell{eps, seed, c, 0.0, {}, false});
        }
    }

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) {
            try {
                const auto result = simulate(cells[i].config);
                cells[i].red = result.stats.phase1_red_frac;
            } catch (const ConfigurationError& e) {
                cells[i].error = e.what();
            } catch (const std::exception& e) {
                cells[i].error = e.what();
                cells[i].internal = true;
            }
        }
    };
    const int count = std::max(1, std::min<int>(threads, static_cast<int>(cells.size())));
    std::vector<std::thread> pool;
    for (int t = 1; t < count; ++t) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto& t : pool) {
        t.join();
    }
    for (const auto& c : cells) {
        if (!c.error.empty()) {
            if (c.internal) {
                throw InternalConsistencyError("cell epsilon=" + format_double(c.epsilon) + " seed=" +
                                               std::to_string(c.seed) + ": " + c.error);
            }
            throw ConfigurationError(c.error);
        }
    }

    std::vector<std::pair<double, double>> results;
    std::ostringstream table;
    table << "# mode=sweep\n# r=" << o.r << "\n# p=" << o.p << "\n# n=" << o.n
          << "\n# modified=" << (o.modified ? "true" : "false") << "\n# epsilons=" << epsilons_arg
          << "\n# seeds=" << seeds_arg << "\n# graph_seed=" << (o.graph_seed.empty() ? "seed" : o.graph_seed)
          << "\n# weights=" << weights_to_string(cells.front().config.tuning.weights) << "\n";
    if (!o.cert.empty()) {
        table << "# cert=" << o.cert << "\n";
    }
    table << "epsilon,seed,steps,red_frac\n";
    for (const auto& c : cells) {
        table << format_double(c.epsilon) << "," << c.seed << "," << c.config.steps << "," << format_double(c.red)
              << "\n";
        results.emplace_back(c.epsilon, c.red);
    }
    if (!out_path.empty()) {
        write_file(out_path, table.str());
    } else {
        out << table.str();
    }

    const RedScaling scaling = red_scaling(results);
    out << std::setprecision(6);
    for (const auto& g : scaling.groups) {
        out << "epsilon=" << g.epsilon << " mean red fraction=" << g.mean_red << " (" << g.seeds << " seeds)\n";
    }
    for (const auto& [eps, ratio] : scaling.halving_ratios) {
        out << "ratio red(" << eps / 2 << ")/red(" << eps << ") = " << ratio << "\n";
    }
    if (scaling.slope) {
        out << "log-log slope: " << *scaling.slope << "\n";
    } else {
        out << "no reds at any epsilon: scaling is degenerate\n";
    }
    return exit_ok;
}

int verify_dump(const std::string& path, std::optional<double> bound_override, std::ostream& out) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigurationError("cannot read '" + path + "'");
    }
    const ColoringDump dump = read_coloring_dump(in);
    SimulationConfig config;
    config.cfg = palette(dump.r, dump.p);
    config.tuning = standard_tuning(config.cfg, 0.0);
    const auto kind = dump.value("graph");
    if (!kind) {
        throw ParseError("dump does not record its graph");
    }
    config.kind = graph_kind_from_string(*kind);
    auto need = [&](const char* key) {
        const auto v = dump.value(key);
        if (!v) {
            throw ParseError(std::string("dump does not record '") + key + "'");
        }
        return *v;
    };
    if (config.kind == GraphKind::tree_ball) {
        config.radius = static_cast<int>(parse_seed(need("radius")));
    } else {
        config.n = static_cast<long>(parse_seed(need("n")));
        config.graph_seed = parse_seed(need("graph_seed"));
    }
    validate(config);
    const auto graph = build_graph(config);
    if (graph->size() != dump.n) {
        throw ParseError("dump vertex count does not match its graph");
    }
    ColoringState state(graph, config.cfg);
    long red = 0;
    long uncolored = 0;
    for (int v = 0; v < dump.n; ++v) {
        const Color c = dump.colors[static_cast<std::size_t>(v)];
        if (c == kUncolored) {
            ++uncolored;
            continue;
        }
        red += c == kRed ? 1 : 0;
        state.set_color(v, c);
    }
    double bound = 0.05;
    if (bound_override) {
        bound = *bound_override;
    } else if (const auto b = dump.value("extra_bound")) {
        bound = parse_double(*b, "extra_bound");
    }
    const auto violations = verify_proper(state);
    const double extra = static_cast<double>(state.extra_count()) / static_cast<double>(dump.n);
    out << "vertices: " << dump.n << ", violating edges: " << violations.size() << ", red: " << red
        << ", uncolored: " << uncolored << "\n";
    const std::size_t shown = std::min<std::size_t>(violations.size(), 20);
    for (std::size_t i = 0; i < shown; ++i) {
        const auto& v = violations[i];
        out << "violation: edge " << v.u << " " << v.v << " color "
            << (v.color == kRed ? std::string("red") : std::to_string(v.color)) << "\n";
    }
    out << "extra fraction: " << extra << " (bound " << bound << ")\n";
    const bool ok = violations.empty() && red == 0 && uncolored == 0 && extra <= bound;
    out << (ok ? "coloring verified" : "coloring rejected") << "\n";
    return ok ? exit_ok : exit_failed;
}

int verify_cert(const std::string& path, std::ostream& out) {
    const Certificate cert = read_certificate(path);
    out << "certificate reproduces: status " << cert.status;
    if (cert.R) {
        out << ", R=" << std::setprecision(10) << *cert.R;
    }
    out << "\n";
    return cert.certified() ? exit_ok : exit_failed;
}

} // namespace

int execute(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
    try {
        const std::vector<std::string> args = expand_config(raw_args);
        CLI::App app{"Greedy cascade coloring of regular trees: certification and simulation"};
        app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
        app.require_subcommand(1);

        int r = 4;
        int p = 3;
        double threshold = 0.99999;
        double epsilon = 0.0;
        std::string weights;
        std::string out_path;
        ControlOptions control;

        auto* certify_cmd = app.add_subcommand("certify", "Integrate the type dynamics and certify subcriticality");
        certify_cmd->add_option("--r", r, "Regularity")->capture_default_str();
        certify_cmd->add_option("--p", p, "Palette size")->capture_default_str();
        certify_cmd->add_option("--threshold", threshold, "Threshold for g and remainder growth")
            ->capture_default_str();
        certify_cmd->add_option("--epsilon", epsilon, "Process step recorded in the certificate (0: any)");
        certify_cmd->add_option("--weights", weights, "Weight overrides 'd,c:w;...'");
        certify_cmd->add_option("--out", out_path, "Certificate path");
        control.add(certify_cmd);

        auto* integrate_cmd = app.add_subcommand("integrate", "Integrate the type dynamics to a trajectory CSV");
        integrate_cmd->add_option("--r", r, "Regularity")->capture_default_str();
        integrate_cmd->add_option("--p", p, "Palette size")->capture_default_str();
        integrate_cmd->add_option("--weights", weights, "Weight overrides 'd,c:w;...'");
        integrate_cmd->add_option("--out", out_path, "CSV path (default: standard output)");
        control.add(integrate_cmd);

        SimulateOptions sim;
        auto* simulate_cmd = app.add_subcommand("simulate", "Run the coloring process on a finite graph");
        sim.add(simulate_cmd, false);

        SimulateOptions sweep_opts;
        std::string epsilons = "0.04,0.02,0.01";
        std::string seeds = "1,2,3";
        int threads = static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
        auto* sweep_cmd = app.add_subcommand("sweep", "Phase-1 red fraction over an epsilon grid");
        sweep_opts.add(sweep_cmd, true);
        sweep_cmd->add_option("--epsilons", epsilons, "Comma-separated epsilon values")->capture_default_str();
        sweep_cmd->add_option("--seeds", seeds, "Comma-separated seeds")->capture_default_str();
        sweep_cmd->add_option("--threads", threads, "Worker threads");
        sweep_cmd->add_option("--out", out_path, "Table CSV path (default: standard output)");

        std::string cert_path;
        std::string dump_path;
        std::optional<double> extra_bound;
        auto* verify_cmd = app.add_subcommand("verify", "Re-validate a certificate or a coloring dump");
        auto* cert_opt = verify_cmd->add_option("--cert", cert_path, "Certificate to re-validate");
        auto* dump_opt = verify_cmd->add_option("--dump", dump_path, "Coloring dump to check");
        cert_opt->excludes(dump_opt);
        verify_cmd->add_option("--extra-bound", extra_bound, "Override the dump's declared extra-color bound");

        std::vector<std::string> reversed(args.rbegin(), args.rend());
        try {
            app.parse(reversed);
        } catch (const CLI::Success& e) {
            app.exit(e, out, err);
            return exit_ok;
        } catch (const CLI::ParseError& e) {
            app.exit(e, out, err);
            return exit_config;
        }

        if (certify_cmd->parsed()) {
            return run_certify(r, p, threshold, epsilon, weights, control, out_path, out);
        }
        if (integrate_cmd->parsed()) {
            return run_integrate(r, p, 0.0, weights, control, out_path, out);
        }
        if (simulate_cmd->parsed()) {
            return run_simulate(sim, out);
        }
        if (sweep_cmd->parsed()) {
            if (threads < 1) {
                throw ConfigurationError("threads must be at least 1");
            }
            return run_sweep(sweep_opts, epsilons, seeds, threads, out_path, out);
        }
        if (verify_cmd->parsed()) {
            if (cert_path.empty() == dump_path.empty()) {
                throw ConfigurationError("verify needs exactly one of --cert and --dump");
            }
            return cert_path.empty() ? verify_dump(dump_path, extra_bound, out) : verify_cert(cert_path, out);
        }
        throw ConfigurationError("no subcommand given");
    } catch (const VerificationError& e) {
        err << "verification failed: " << e.what() << "\n";
        return exit_failed;
    } catch (const ConfigurationError& e) {
        err << "configuration error: " << e.what() << "\n";
        return exit_config;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return exit_config;
    } catch (const InsufficientDataError& e) {
        err << "insufficient data: " << e.what() << "\n";
        return exit_config;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return exit_internal;
    }
}

} // namespace treecolor
