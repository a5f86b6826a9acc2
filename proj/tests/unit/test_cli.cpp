#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "chiralsim/config.hpp"

namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("chiralsim_cli_test") / name;
    fs::remove_all(p);
    return p;
}

int run(const std::string& args) {
    const std::string cmd = std::string(CHIRALSIM_CLI) + " " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path write_config(const std::string& name, const std::string& text) {
    const fs::path p = fs::temp_directory_path() / ("chiralsim_cli_test_" + name + ".yaml");
    std::ofstream(p) << text;
    return p;
}

void check_header(const fs::path& csv) {
    const std::string s = slurp(csv);
    INFO(csv);
    CHECK(s.rfind("# ", 0) == 0);
    CHECK(s.find("# units:") != std::string::npos);
    CHECK(s.find("# config_digest:") != std::string::npos);
}

const std::string kSmall = "geometry:\n  N: 11\nsource:\n  t_end: 5\n  stride: 50\n";

} // namespace

TEST_CASE("every subcommand writes its tables", "[cli]") {
    const auto cfg = write_config("small", kSmall + "disorder:\n  samples: 3\n"
                                                    "sweep:\n  axes:\n    - param: N\n      values: [5, 7]\n");
    const fs::path out = scratch("all");
    const std::string base = "--config " + cfg.string() + " --out " + out.string();

    REQUIRE(run(base + " modes") == 0);
    for (auto f : {"fiber_mode.csv", "decay_curve.csv", "array.csv"}) check_header(out / f);
    REQUIRE(run(base + " spectrum") == 0);
    for (auto f : {"eigenvalues.csv", "intensity.csv", "mode_metrics.csv", "metrics.csv", "hamiltonian.csv"})
        check_header(out / f);
    REQUIRE(run(base + " evolve --js -2") == 0);
    for (auto f : {"amplitudes.csv", "observables.csv", "decay_fit.csv"}) check_header(out / f);
    REQUIRE(run(base + " disorder --delta 20") == 0);
    for (auto f : {"disorder_samples.csv", "disorder_ensemble.csv"}) check_header(out / f);
    REQUIRE(run(base + " sweep") == 0);
    check_header(out / "sweep.csv");
    CHECK_FALSE(fs::exists(out / "error.json"));

    const auto echoed = chiralsim::parse_config((out / "effective_config.yaml").string());
    CHECK(echoed.scenario.array.N == 11);
    CHECK(echoed.evolve.t_end == 5.0);
}

TEST_CASE("reruns are byte identical, regardless of threads", "[cli]") {
    const auto cfg = write_config("det", kSmall + "disorder:\n  samples: 6\n");
    const fs::path a = scratch("det_a"), b = scratch("det_b");
    const std::string base = "--config " + cfg.string() + " --seed 17";
    REQUIRE(run(base + " --threads 1 --out " + a.string() + " disorder") == 0);
    REQUIRE(run(base + " --threads 3 --out " + b.string() + " disorder") == 0);
    for (auto f : {"disorder_samples.csv", "disorder_ensemble.csv"}) CHECK(slurp(a / f) == slurp(b / f));

    REQUIRE(run(base + " --out " + a.string() + " spectrum") == 0);
    REQUIRE(run(base + " --out " + b.string() + " spectrum") == 0);
    for (auto f : {"eigenvalues.csv", "intensity.csv", "metrics.csv"}) CHECK(slurp(a / f) == slurp(b / f));

    const fs::path c = scratch("det_c");
    REQUIRE(run("--config " + cfg.string() + " --seed 18 --out " + c.string() + " disorder") == 0);
    CHECK(slurp(a / "disorder_samples.csv") != slurp(c / "disorder_samples.csv"));
}

TEST_CASE("configuration errors produce error.json and a nonzero exit", "[cli]") {
    const auto cfg = write_config("bad", "geometry:\n  N: 11\n  tilt: 0.1\n");
    const fs::path out = scratch("bad");
    CHECK(run("--config " + cfg.string() + " --out " + out.string() + " spectrum") == 2);
    REQUIRE(fs::exists(out / "error.json"));
    const std::string j = slurp(out / "error.json");
    CHECK(j.find("\"error\": \"config\"") != std::string::npos);
    CHECK(j.find("\"key\": \"geometry.tilt\"") != std::string::npos);
    CHECK(j.find("\"line\": 3") != std::string::npos);

    const fs::path out2 = scratch("bad_js");
    CHECK(run("--out " + out2.string() + " evolve --js 99") == 2);
    CHECK(fs::exists(out2 / "error.json"));
}

TEST_CASE("shipped configurations parse", "[cli][config]") {
    for (const auto& e : fs::directory_iterator(CONFIG_DIR)) {
        if (e.path().extension() != ".yaml") continue;
        INFO(e.path());
        CHECK_NOTHROW(chiralsim::parse_config(e.path().string()));
    }
}
