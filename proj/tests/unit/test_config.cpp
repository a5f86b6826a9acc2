#include <catch_amalgamated.hpp>

#include <string>

#include "chiralsim/config.hpp"

using namespace chiralsim;
using Catch::Approx;

namespace {

ConfigError error_of(const std::string& text) {
    try {
        parse_config_string(text);
    } catch (const ConfigError& e) {
        return e;
    }
    FAIL("expected a ConfigError for:\n" << text);
    throw;
}

} // namespace

TEST_CASE("an empty document yields the defaults", "[config]") {
    const RunConfig c = parse_config_string("");
    CHECK(c == default_config());
    CHECK(c.scenario.array.N == 41);
    CHECK(c.scenario.array.d == 9073.8);
    CHECK(c.scenario.array.D == 1000.0);
    CHECK(c.scenario.array.theta == 0.002);
    CHECK(c.scenario.fiber.a == 250.0);
    CHECK(c.scenario.fiber.n1 == 1.4525);
    CHECK(c.evolve.source.tau_w == 2.0);
    CHECK(c.evolve.source.omega_s == -0.0032);
    CHECK(c.disorder.delta == Approx(2.0 * 0.002 * 9073.8));
    CHECK_FALSE(c.sweep.has_value());
}

TEST_CASE("unknown keys are reported with their path and line", "[config]") {
    const auto e = error_of("seed: 3\ngeometry:\n  N: 21\n  spacing: 5\n");
    CHECK(e.key_path() == "geometry.spacing");
    CHECK(e.line() == 4);
    CHECK(std::string(e.what()).find("unknown key") != std::string::npos);

    const auto top = error_of("fibre:\n  a: 250\n");
    CHECK(top.key_path() == "fibre");
    CHECK(top.line() == 1);
}

TEST_CASE("type mismatches name the offending key", "[config]") {
    const auto e = error_of("geometry:\n  N: lots\n");
    CHECK(e.key_path() == "geometry.N");
    CHECK(e.line() == 2);
    const auto f = error_of("fiber:\n  a: [1, 2]\n");
    CHECK(f.key_path() == "fiber.a");
}

TEST_CASE("malformed YAML reports a line", "[config]") {
    const auto e = error_of("geometry:\n  N: 21\n  d: [1, 2\nsource:\n  j_s: 0\n");
    CHECK(e.line() > 0);
    CHECK(std::string(e.what()).find("malformed") != std::string::npos);
}

TEST_CASE("physical constraints are enforced at parse time", "[config]") {
    CHECK(error_of("geometry:\n  N: 20\n").key_path() == "geometry");
    CHECK(error_of("geometry:\n  theta: 0.2\n").key_path() == "geometry");
    CHECK(error_of("fiber:\n  n1: 0.9\n").key_path() == "fiber");
    CHECK(error_of("source:\n  j_s: 30\n").key_path() == "source");
    CHECK(error_of("source:\n  tau_w: 0\n").key_path() == "source");
    CHECK(error_of("disorder:\n  delta: -1\n").key_path() == "disorder.delta");
    CHECK(error_of("geometry:\n  y0: 100\n  H: 700\n  D: 1000\n").key_path() == "geometry.D");
    CHECK(error_of("geometry:\n  y0: 100\n").key_path() == "geometry");
    CHECK(error_of("model:\n  variant: hermitian\n").key_path() == "model.variant");
    CHECK(error_of("io:\n  units: hbar\n").key_path() == "io.units");
    CHECK(error_of("sweep:\n  axes:\n    - param: width\n      values: [1]\n").key_path() == "sweep.axes[0].param");
}

TEST_CASE("geometry may be given by nearest distance and extent", "[config]") {
    const RunConfig c = parse_config_string("geometry:\n  N: 41\n  y0: 137.05\n  H: 725.9\n");
    CHECK(c.scenario.array.D == Approx(1000.0));
    CHECK(c.scenario.array.theta == Approx(725.9 / (40 * 9073.8)));
    CHECK(c.scenario.array.nearest_distance() == Approx(137.05));
}

TEST_CASE("sweep axes accept explicit values or a range", "[config]") {
    const RunConfig c = parse_config_string("seed: 11\n"
                                            "sweep:\n"
                                            "  axes:\n"
                                            "    - param: H_over_a\n"
                                            "      start: 1\n"
                                            "      stop: 3\n"
                                            "      step: 0.5\n"
                                            "    - param: N\n"
                                            "      values: [21, 41]\n"
                                            "  metrics: [fwhm_min, skin_fraction]\n");
    REQUIRE(c.sweep);
    CHECK(c.sweep->axes[0].values == std::vector<double>{1.0, 1.5, 2.0, 2.5, 3.0});
    CHECK(c.sweep->axes[1].param == SweepParam::N);
    CHECK(c.sweep->size() == 10);
    CHECK(c.sweep->seed == 11);
    CHECK(c.disorder.seed == 11);
}

TEST_CASE("the emitted effective configuration parses back to itself", "[config]") {
    const RunConfig c = parse_config_string("seed: 42\n"
                                            "fiber:\n  a: 240.5\n  rate_scale: 0.75\n"
                                            "geometry:\n  N: 31\n  d: 9100.1\n  theta: 0.0017\n"
                                            "  orientation: negative_toward_top\n"
                                            "model:\n  variant: chiral_env\n  gamma0: 0.3\n  phase: guided\n"
                                            "source:\n  j_s: -5\n  omega_s: 0.1\n  t_end: 12.5\n"
                                            "disorder:\n  delta: 3.3\n  samples: 4\n"
                                            "sweep:\n  axes:\n    - param: delta\n      values: [0, 0.1, 1e-7]\n"
                                            "io:\n  plots: true\n  units: gamma0\n");
    const std::string text = emit_config(c);
    const RunConfig back = parse_config_string(text);
    CHECK(back == c);
    CHECK(emit_config(back) == text);
    CHECK(parse_config_string(emit_config(default_config())) == default_config());
}
