#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "treecolor/certificate.hpp"
#include "treecolor/certifier.hpp"
#include "treecolor/dynamics.hpp"
#include "treecolor/errors.hpp"

using namespace treecolor;

namespace {

Trajectory synthetic(const std::vector<double>& g, const std::vector<double>& rem) {
    Trajectory t;
    t.cfg = PaletteConfig{4, 3};
    const auto z = initial_distribution(t.cfg);
    for (std::size_t i = 0; i < g.size(); ++i) {
        t.push(static_cast<double>(i), z, g[i], rem[i], g[i]);
    }
    return t;
}

IntegrationControl coarse() {
    IntegrationControl c;
    c.step = 0.01;
    c.max_time = 40.0;
    c.halvings = 1;
    return c;
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("treecolor_test_" + name);
}

} // namespace

TEST_CASE("find_R picks the first sample below the threshold") {
    const auto t = synthetic({0.1, 0.5, 0.7, 0.8, 0.9}, {3.0, 2.0, 1.2, 0.95, 0.5});
    const auto stop = find_R(t, 0.99999);
    REQUIRE(stop.found());
    CHECK(*stop.R == 3.0);
    CHECK(stop.index == 3);
}

TEST_CASE("find_R reports a growth violation before R") {
    const auto t = synthetic({0.1, 0.5, 1.0, 0.8}, {3.0, 2.0, 1.2, 0.5});
    const auto stop = find_R(t, 0.99999);
    CHECK_FALSE(stop.found());
    REQUIRE(stop.violation_time.has_value());
    CHECK(*stop.violation_time == 2.0);
}

TEST_CASE("find_R without a crossing") {
    const auto t = synthetic({0.1, 0.2}, {3.0, 2.0});
    const auto stop = find_R(t, 0.99999);
    CHECK_FALSE(stop.found());
    CHECK_FALSE(stop.violation_time.has_value());
    CHECK_THROWS_AS(find_R(Trajectory{}, 0.5), PreconditionError);
    CHECK_THROWS_AS(find_R(t, 1.5), ConfigurationError);
}

TEST_CASE("rk4 converges at fourth order, euler at first") {
    const PaletteConfig cfg{4, 3};
    const auto tuning = standard_tuning(cfg, 0.0);
    auto final_state = [&](Method m, double h) {
        IntegrationControl c;
        c.method = m;
        c.step = h;
        c.max_time = 4.0;
        const auto t = integrate(cfg, tuning, c);
        return t.state(t.size() - 1);
    };
    auto dist = [](const TypeDistribution& a, const TypeDistribution& b) {
        double d = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            d = std::max(d, std::abs(a[i] - b[i]));
        }
        return d;
    };
    const auto ref = final_state(Method::rk4, 0.0025);
    const double e1 = dist(final_state(Method::rk4, 0.08), ref);
    const double e2 = dist(final_state(Method::rk4, 0.04), ref);
    CHECK(e1 / e2 > 12.0);
    CHECK(e1 / e2 < 20.0);
    const double f1 = dist(final_state(Method::euler, 0.02), ref);
    const double f2 = dist(final_state(Method::euler, 0.01), ref);
    CHECK(f1 / f2 > 1.7);
    CHECK(f1 / f2 < 2.3);
}

TEST_CASE("mass is conserved up to the colored fraction and stays nonnegative") {
    const PaletteConfig cfg{6, 4};
    IntegrationControl c = coarse();
    c.max_time = 60.0;
    const auto t = integrate(cfg, standard_tuning(cfg, 0.0), c);
    double previous = 1.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const auto z = t.state(i);
        for (std::size_t k = 0; k < z.size(); ++k) {
            CHECK(z[k] >= 0.0);
        }
        // The uncolored mass can only decrease.
        CHECK(z.sum() <= previous + 1e-12);
        previous = z.sum();
    }
}

TEST_CASE("certify (4,3) on a coarse grid") {
    const PaletteConfig cfg{4, 3};
    const auto cert = certify(cfg, standard_tuning(cfg, 0.0), 0.99999, coarse());
    CHECK(cert.certified());
    REQUIRE(cert.R.has_value());
    CHECK(*cert.R > 9.0);
    CHECK(*cert.R < 11.0);
    CHECK(cert.margin_g > 0.0);
    CHECK(cert.margin_remainder > 0.0);
    CHECK(cert.samples.back().time == *cert.R);
    CHECK(cert.samples.size() <= max_stored_samples);
    CHECK_NOTHROW(verify_certificate(cert));
}

TEST_CASE("an unreachable threshold fails certification") {
    const PaletteConfig cfg{4, 3};
    const auto cert = certify(cfg, standard_tuning(cfg, 0.0), 0.01, coarse());
    CHECK_FALSE(cert.certified());
    CHECK_FALSE(cert.R.has_value());
    CHECK_FALSE(cert.diagnostics.empty());
}

TEST_CASE("certificate round trip, tampering and truncation") {
    const PaletteConfig cfg{4, 3};
    const auto cert = certify(cfg, standard_tuning(cfg, 0.0), 0.99999, coarse());
    const auto path = temp_file("cert.json");
    const auto back = certificate_roundtrip(cert, path);
    CHECK(certificate_to_json(back) == certificate_to_json(cert));
    CHECK(back.R == cert.R);

    auto tampered = back;
    tampered.samples[tampered.samples.size() / 2].g += 1e-3;
    CHECK_THROWS_AS(verify_certificate(tampered), VerificationError);

    auto lying = back;
    lying.max_g_on_0_R -= 0.1;
    CHECK_THROWS_AS(verify_certificate(lying), VerificationError);

    const std::string text = certificate_to_json(cert);
    CHECK_THROWS_AS(certificate_from_json(text.substr(0, text.size() / 2)), ParseError);
    CHECK_THROWS_AS(certificate_from_json("{}"), ParseError);
    CHECK_THROWS_AS(read_certificate(temp_file("does_not_exist.json")), ParseError);
    std::filesystem::remove(path);
}

TEST_CASE("interpolation hits stored samples and clamps outside") {
    const PaletteConfig cfg{4, 3};
    const auto cert = certify(cfg, standard_tuning(cfg, 0.0), 0.99999, coarse());
    const auto& s = cert.samples[cert.samples.size() / 3];
    CHECK(interpolate(cert, s.time) == s.z);
    CHECK(interpolate(cert, -1.0) == cert.samples.front().z);
    CHECK(interpolate(cert, 1e6) == cert.samples.back().z);
}

TEST_CASE("control validation") {
    IntegrationControl c;
    c.step = 0.0;
    CHECK_THROWS_AS(validate(c), ConfigurationError);
    c.step = 0.2;
    CHECK_THROWS_AS(validate(c), ConfigurationError);
    c = IntegrationControl{};
    c.sample_stride = 0;
    CHECK_THROWS_AS(validate(c), ConfigurationError);
    CHECK(method_from_string("euler") == Method::euler);
    CHECK_THROWS_AS(method_from_string("midpoint"), ConfigurationError);
}
