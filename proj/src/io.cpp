#include "treecolor/io.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "treecolor/errors.hpp"

namespace treecolor {

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::vector<std::string> type_columns(const PaletteConfig& cfg) {
    std::vector<std::string> out;
    for (const auto& t : type_space(cfg)) {
        out.push_back("z_" + std::to_string(t.d) + "_" + std::to_string(t.c));
    }
    return out;
}

namespace {

void write_comments(std::ostream& out, const ConfigEntries& config) {
    for (const auto& [key, value] : config) {
        out << "# " << key << "=" << value << "\n";
    }
}

template <class Map>
nlohmann::ordered_json histogram_json(const Map& histogram) {
    auto out = nlohmann::ordered_json::array();
    for (const auto& [value, count] : histogram) {
        out.push_back({value, count});
    }
    return out;
}

} // namespace

void write_stats_csv(std::ostream& out, const RunStats& stats, const ConfigEntries& config) {
    write_comments(out, config);
    out << "step,time,uncolored_frac,red_frac,extra_frac,active,mean_cascade,max_cascade";
    for (const auto& col : type_columns(stats.cfg)) {
        out << "," << col;
    }
    out << "\n";
    for (const auto& s : stats.steps) {
        out << s.step << "," << format_double(s.time) << "," << format_double(s.uncolored_frac) << ","
            << format_double(s.red_frac) << "," << format_double(s.extra_frac) << "," << s.active << ","
            << format_double(s.mean_cascade) << "," << s.max_cascade;
        for (std::size_t i = 0; i < s.z.size(); ++i) {
            out << "," << format_double(s.z[i]);
        }
        out << "\n";
    }
}

std::string summary_json(const RunStats& stats, const ConfigEntries& config) {
    nlohmann::ordered_json j;
    auto cfg = nlohmann::ordered_json::object();
    for (const auto& [key, value] : config) {
        cfg[key] = value;
    }
    j["config"] = cfg;
    j["n"] = stats.n;
    j["steps"] = stats.steps.empty() ? 0 : static_cast<long>(stats.steps.size()) - 1;
    j["phase1_red_frac"] = stats.phase1_red_frac;
    j["final_red_frac"] = stats.final_red_frac;
    j["final_extra_frac"] = stats.final_extra_frac;
    j["violations"] = stats.violations;
    j["completion_failures"] = stats.completion_failures;
    j["tidy_failures"] = stats.tidy_failures;
    j["buffer"] = {{"rounds", stats.buffer.rounds},
                   {"components", stats.buffer.components},
                   {"vertices_colored", stats.buffer.vertices_colored},
                   {"new_red", stats.buffer.new_red},
                   {"budget_failures", stats.buffer.budget_failures},
                   {"activity_by_round", stats.buffer.activity_by_round}};
    j["component_histogram"] = histogram_json(stats.component_histogram);
    j["cascade_histogram"] = histogram_json(stats.cascade_histogram);
    j["rounds_histogram"] = histogram_json(stats.rounds_histogram);
    return j.dump(1) + "\n";
}

void write_coloring_dump(std::ostream& out, const ColoringState& state, const ConfigEntries& config) {
    const auto& cfg = state.config();
    out << state.size() << " " << cfg.r << " " << cfg.p << "\n";
    for (int v = 0; v < state.size(); ++v) {
        const Color c = state.color(v);
        out << v << " ";
        if (c == kRed) {
            out << "red";
        } else if (c == kUncolored) {
            out << "uncolored";
        } else {
            out << static_cast<int>(c);
        }
        out << "\n";
    }
    write_comments(out, config);
}

std::optional<std::string> ColoringDump::value(const std::string& key) const {
    for (const auto& [k, v] : config) {
        if (k == key) {
            return v;
        }
    }
    return std::nullopt;
}

ColoringDump read_coloring_dump(std::istream& in) {
    ColoringDump dump;
    std::string line;
    long line_no = 0;
    bool header = false;
    std::vector<char> seen;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        const std::string where = "line " + std::to_string(line_no);
        if (line[0] == '#') {
            const auto body = line.substr(line.find_first_not_of("# ") == std::string::npos
                                              ? line.size()
                                              : line.find_first_not_of("# "));
            const auto eq = body.find('=');
            if (eq == std::string::npos) {
                throw ParseError(where + ": comment is not key=value");
            }
            dump.config.emplace_back(body.substr(0, eq), body.substr(eq + 1));
            continue;
        }
        std::istringstream ls(line);
        if (!header) {
            if (!(ls >> dump.n >> dump.r >> dump.p) || dump.n <= 0) {
                throw ParseError(where + ": expected 'n r p'");
            }
            std::string rest;
            if (ls >> rest) {
                throw ParseError(where + ": trailing text after 'n r p'");
            }
            if (dump.p < 2 || dump.p > 15) {
                throw ParseError(where + ": palette size out of range");
            }
            dump.colors.assign(static_cast<std::size_t>(dump.n), kUncolored);
            seen.assign(static_cast<std::size_t>(dump.n), 0);
            header = true;
            continue;
        }
        long v = -1;
        std::string token;
        std::string rest;
        if (!(ls >> v >> token) || (ls >> rest)) {
            throw ParseError(where + ": expected 'v color'");
        }
        if (v < 0 || v >= dump.n) {
            throw ParseError(where + ": vertex " + std::to_string(v) + " out of range");
        }
        if (seen[static_cast<std::size_t>(v)]++ != 0) {
            throw ParseError(where + ": vertex " + std::to_string(v) + " listed twice");
        }
        Color c = kUncolored;
        if (token == "red") {
            c = kRed;
        } else if (token == "uncolored") {
            c = kUncolored;
        } else {
            int value = -1;
            const auto res = std::from_chars(token.data(), token.data() + token.size(), value);
            if (res.ec != std::errc() || res.ptr != token.data() + token.size() || value < 0 || value > dump.p) {
                throw ParseError(where + ": color '" + token + "' is not in 0.." + std::to_string(dump.p));
            }
            c = static_cast<Color>(value);
        }
        dump.colors[static_cast<std::size_t>(v)] = c;
    }
    if (!header) {
        throw ParseError("coloring dump is empty");
    }
    for (int v = 0; v < dump.n; ++v) {
        if (seen[static_cast<std::size_t>(v)] == 0) {
            throw ParseError("coloring dump has no line for vertex " + std::to_string(v));
        }
    }
    return dump;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj, const ConfigEntries& config) {
    write_comments(out, config);
    out << "time,g,remainder_growth";
    for (const auto& col : type_columns(traj.cfg)) {
        out << "," << col;
    }
    out << "\n";
    const std::size_t width = TypeSpace(traj.cfg).size();
    for (std::size_t i = 0; i < traj.size(); ++i) {
        out << format_double(traj.times[i]) << "," << format_double(traj.g_values[i]) << ","
            << format_double(traj.remainder_values[i]);
        for (std::size_t k = 0; k < width; ++k) {
            out << "," << format_double(traj.state_values[i * width + k]);
        }
        out << "\n";
    }
}

} // namespace treecolor
