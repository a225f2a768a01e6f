#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>

#include "treecolor/cli.hpp"
#include "treecolor/errors.hpp"
#include "treecolor/io.hpp"
#include "treecolor/process.hpp"

using namespace treecolor;

namespace {

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("treecolor_cli_" + name)).string();
}

int run(const std::vector<std::string>& args, std::string* out_text = nullptr) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = execute(args, out, err);
    if (out_text != nullptr) {
        *out_text = out.str();
    }
    return code;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream(path) << text;
}

} // namespace

TEST_CASE("shortest double formatting round-trips") {
    for (double x : {0.0, 1.0, 0.1, 1.0 / 3.0, 9.847500000000001, 1e-300, -2.5e17}) {
        CHECK(std::stod(format_double(x)) == x);
    }
    CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("coloring dump round trip") {
    const PaletteConfig cfg{4, 3};
    auto s = state_from_fixture(parse_fixture("4 4\n0 1\n1 2\n2 3\ncolor 0 0\ncolor 1 red\ncolor 2 3\n"), cfg);
    std::ostringstream out;
    write_coloring_dump(out, s, {{"graph", "fixture"}, {"n", "4"}});
    std::istringstream in(out.str());
    const auto dump = read_coloring_dump(in);
    CHECK(dump.n == 4);
    CHECK(dump.r == 4);
    CHECK(dump.p == 3);
    CHECK(dump.colors == std::vector<Color>{0, kRed, 3, kUncolored});
    CHECK(dump.value("graph") == std::optional<std::string>("fixture"));
    CHECK_FALSE(dump.value("missing").has_value());
}

TEST_CASE("malformed dumps name the line") {
    auto parse = [](const std::string& text) {
        std::istringstream in(text);
        return read_coloring_dump(in);
    };
    CHECK_THROWS_AS(parse(""), ParseError);
    CHECK_THROWS_AS(parse("2 4 3\n0 1\n"), ParseError);
    CHECK_THROWS_AS(parse("2 4 3\n0 1\n1 7\n"), ParseError);
    CHECK_THROWS_AS(parse("2 4 3\n0 1\n0 2\n"), ParseError);
    try {
        parse("2 4 3\n0 1\n1 blue\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
}

TEST_CASE("stats CSV layout") {
    const PaletteConfig cfg{4, 3};
    ColoringState s(std::make_shared<const Graph>(gen_regular_graph(200, 4, 1)), cfg);
    const auto tuning = standard_tuning(cfg, 0.05);
    const auto res = run_phase1(s, tuning, 5, CounterRng(1));
    const auto stats = make_run_stats(res, cfg, tuning, 200);
    std::ostringstream out;
    write_stats_csv(out, stats, {{"seed", "1"}});
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "# seed=1");
    std::getline(in, line);
    CHECK(line.rfind("step,time,uncolored_frac,red_frac,extra_frac,active,mean_cascade,max_cascade,z_0_2", 0) == 0);
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
    }
    CHECK(rows == 6);
}

TEST_CASE("cli: certify and verify exit codes") {
    const std::string cert = temp_path("cert.json");
    CHECK(run({"certify", "--r", "4", "--p", "3", "--step", "0.01", "--halvings", "1", "--out", cert}) == exit_ok);
    std::string text;
    CHECK(run({"verify", "--cert", cert}, &text) == exit_ok);
    CHECK(text.find("certified") != std::string::npos);

    const std::string failed = temp_path("failed.json");
    CHECK(run({"certify", "--step", "0.01", "--halvings", "0", "--max-time", "20", "--threshold", "0.01", "--out",
               failed}) == exit_failed);
    CHECK(run({"verify", "--cert", failed}) == exit_failed);

    // Tampering with a stored number breaks reproduction.
    const std::string tampered = temp_path("tampered.json");
    {
        std::string t = slurp(cert);
        const auto start = t.find("\"max_g_on_0_R\": ") + 16;
        const auto end = t.find_first_of(",\n", start);
        t.replace(start, end - start, "0.5");
        spit(tampered, t);
    }
    CHECK(run({"verify", "--cert", tampered}) == exit_failed);

    const std::string broken = temp_path("broken.json");
    spit(broken, slurp(cert).substr(0, 200));
    CHECK(run({"verify", "--cert", broken}) == exit_config);

    CHECK(run({"certify", "--r", "4", "--p", "5"}) == exit_config);
    CHECK(run({"certify", "--step", "-1"}) == exit_config);
    CHECK(run({"frobnicate"}) == exit_config);
    CHECK(run({}) == exit_config);
    CHECK(run({"verify"}) == exit_config);
    for (const auto& f : {cert, failed, tampered, broken}) {
        std::filesystem::remove(f);
    }
}

TEST_CASE("cli: simulate, dump and verify") {
    const std::string dump = temp_path("dump.txt");
    const std::string stats1 = temp_path("stats1.csv");
    const std::string stats2 = temp_path("stats2.csv");
    const std::vector<std::string> base{"simulate", "--r", "4", "--p", "3", "--epsilon", "0.02", "--n", "3000",
                                        "--seed", "5", "--time", "9.85"};
    auto with = [&](std::vector<std::string> extra) {
        auto a = base;
        a.insert(a.end(), extra.begin(), extra.end());
        return a;
    };
    CHECK(run(with({"--stats-out", stats1, "--dump-out", dump})) == exit_ok);
    CHECK(run(with({"--stats-out", stats2})) == exit_ok);
    CHECK(slurp(stats1) == slurp(stats2));
    CHECK_FALSE(slurp(stats1).empty());

    CHECK(run({"verify", "--dump", dump}) == exit_ok);
    CHECK(run({"verify", "--dump", dump, "--extra-bound", "0"}) == exit_failed);

    // Copy vertex 0's color onto one of its neighbors.
    std::istringstream in(slurp(dump));
    const auto parsed = read_coloring_dump(in);
    const auto graph = gen_regular_graph(3000, 4, 5);
    const int u = graph.neighbors(0)[0];
    std::ostringstream bad;
    bad << parsed.n << " " << parsed.r << " " << parsed.p << "\n";
    for (int v = 0; v < parsed.n; ++v) {
        const Color c = v == u ? parsed.colors[0] : parsed.colors[static_cast<std::size_t>(v)];
        bad << v << " " << static_cast<int>(c) << "\n";
    }
    for (const auto& [k, v] : parsed.config) {
        bad << "# " << k << "=" << v << "\n";
    }
    const std::string clash = temp_path("clash.txt");
    spit(clash, bad.str());
    CHECK(run({"verify", "--dump", clash}) == exit_failed);

    const std::string junk = temp_path("junk.txt");
    spit(junk, "3000 4 3\n0 zero\n");
    CHECK(run({"verify", "--dump", junk}) == exit_config);
    CHECK(run({"verify", "--dump", temp_path("nope.txt")}) == exit_config);
    CHECK(run({"verify", "--dump", dump, "--cert", dump}) == exit_config);

    CHECK(run({"simulate", "--n", "100"}) == exit_config);
    CHECK(run({"simulate", "--r", "5", "--epsilon", "0.02", "--n", "101", "--time", "1"}) == exit_config);
    for (const auto& f : {dump, stats1, stats2, clash, junk}) {
        std::filesystem::remove(f);
    }
}

TEST_CASE("cli: config files, explicit flags win") {
    const std::string conf = temp_path("run.conf");
    spit(conf, "# run settings\nr=4\np=3\nepsilon=0.05\nn=500\nseed=3\ntime=1\n");
    const std::string a = temp_path("a.csv");
    const std::string b = temp_path("b.csv");
    CHECK(run({"simulate", "--config", conf, "--stats-out", a}) == exit_ok);
    CHECK(run({"simulate", "--config", conf, "--seed", "4", "--stats-out", b}) == exit_ok);
    CHECK(slurp(a) != slurp(b));
    CHECK(slurp(b).find("# seed=4") != std::string::npos);
    spit(conf, "r=4\nthis line is broken\n");
    CHECK(run({"simulate", "--config", conf}) == exit_config);
    for (const auto& f : {conf, a, b}) {
        std::filesystem::remove(f);
    }
}
