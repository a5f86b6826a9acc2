#include <catch_amalgamated.hpp>

#include <cmath>

#include "chiralsim/chiralsim.hpp"
#include "oracles/fiber_oracle.hpp"

using namespace chiralsim;
using Catch::Approx;

namespace {
const FiberGeometry kGeom{};

const FiberMode& default_mode() {
    static const FiberMode m = solve_propagation_constant(kGeom);
    return m;
}
} // namespace

TEST_CASE("single atom sits at the gap center", "[geometry]") {
    ArraySpec s;
    s.N = 1;
    const AtomArray a = build_array(s);
    REQUIRE(a.size() == 1);
    CHECK(a.x[0] == 0.0);
    CHECK(a.y[0] == 0.0);
    CHECK(a.dist_top[0] == 500.0);
    CHECK(a.dist_bottom[0] == 500.0);
}

TEST_CASE("default array distances", "[geometry]") {
    const ArraySpec s;
    const AtomArray a = build_array(s);
    REQUIRE(a.size() == 41);
    CHECK(a.j_min() == -20);
    const double tilt = 20 * 0.002 * 9073.8;
    CHECK(a.dist_top[a.index_of(-20)] == Approx(500.0 + tilt).epsilon(1e-14));
    CHECK(a.dist_top[a.index_of(20)] == Approx(500.0 - tilt).epsilon(1e-14));
    CHECK(a.dist_top[a.index_of(20)] == Approx(137.05).margin(0.01));
    for (int i = 0; i < a.size(); ++i) {
        CHECK(a.x[i] == a.j[i] * 9073.8);
        CHECK(a.dist_top[i] + a.dist_bottom[i] == Approx(1000.0).epsilon(1e-15));
        CHECK(a.dist_top[i] == a.dist_bottom[a.size() - 1 - i]);
        CHECK(a.dist_top[i] > 0.0);
        CHECK(a.dist_top[i] < 1000.0);
    }
    CHECK(a.warnings.empty());
}

TEST_CASE("extent constructor", "[geometry]") {
    const double d = 10.65 * 852.0;
    const ArraySpec s = ArraySpec::from_extent(41, d, 0.5 * 250.0, 3.0 * 250.0);
    CHECK(s.theta == Approx(750.0 / (40.0 * d)).epsilon(1e-15));
    CHECK(s.D == 1000.0);
    CHECK(s.nearest_distance() == Approx(125.0).epsilon(1e-12));
}

TEST_CASE("orientation flips which end faces the top guide", "[geometry]") {
    ArraySpec s;
    s.orientation = Orientation::NegativeTowardTop;
    const AtomArray a = build_array(s);
    const AtomArray b = build_array(ArraySpec{});
    for (int i = 0; i < a.size(); ++i) CHECK(a.dist_top[i] == b.dist_top[a.size() - 1 - i]);
}

TEST_CASE("geometry validation", "[geometry]") {
    ArraySpec s;
    s.N = 40;
    CHECK_THROWS_AS(build_array(s), GeometryError);
    s = ArraySpec{};
    s.theta = 0.003;  // extent 1089 nm > D
    CHECK_THROWS_AS(build_array(s), GeometryError);
    s = ArraySpec{};
    s.d = 5000.0;
    CHECK_THROWS_AS(build_array(s), GeometryError);
    s.allow_close_spacing = true;
    const AtomArray a = build_array(s);
    CHECK_FALSE(a.warnings.empty());

    s = ArraySpec::from_extent(41, 9073.8, 100.0, 800.0);
    const AtomArray close = build_array(s);
    CHECK_FALSE(close.warnings.empty());
}

TEST_CASE("disorder sampling", "[geometry][disorder]") {
    const AtomArray clean = build_array(ArraySpec{});
    const AtomArray same = apply_disorder(clean, DisorderSpec{0.0, 42, 1}, 3);
    CHECK(same.y == clean.y);

    const DisorderSpec dis{36.0, 7, 10};
    const AtomArray s1 = apply_disorder(clean, dis, 5);
    const AtomArray s2 = apply_disorder(clean, dis, 5);
    CHECK(s1.y == s2.y);
    CHECK(s1.x == clean.x);
    const AtomArray s3 = apply_disorder(clean, dis, 6);
    CHECK(s3.y != s1.y);
    for (int i = 0; i < clean.size(); ++i) {
        CHECK(std::abs(s1.y[i] - clean.y[i]) < 0.5 * dis.delta);
        CHECK(s1.dist_top[i] + s1.dist_bottom[i] == Approx(1000.0).epsilon(1e-14));
    }

    CHECK_THROWS_AS(apply_disorder(clean, DisorderSpec{2000.0, 1, 1}, 0), GeometryError);
    CHECK_THROWS_AS(apply_disorder(clean, DisorderSpec{-1.0, 1, 1}, 0), GeometryError);
}

TEST_CASE("disorder draws are uniform on (-0.5, 0.5)", "[geometry][disorder][property]") {
    const int n = 200000;
    double sum = 0.0, sq = 0.0, lo = 1.0, hi = -1.0;
    for (int i = 0; i < n; ++i) {
        const double r = rng::centered_uniform(123, static_cast<std::uint64_t>(i / 100), static_cast<std::uint64_t>(i % 100));
        sum += r;
        sq += r * r;
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    CHECK(lo > -0.5);
    CHECK(hi < 0.5);
    CHECK(std::abs(sum / n) < 5e-3);
    CHECK(sq / n == Approx(1.0 / 12.0).epsilon(1e-2));
}

TEST_CASE("clean decay profile is mirror symmetric", "[geometry][profile]") {
    const AtomArray a = build_array(ArraySpec{});
    const DecayProfile p = decay_profile(a, default_mode(), kGeom);
    const int n = p.size();
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        CHECK(p.gammaR[i] > 0.0);
        CHECK(std::abs(p.gammaR[i] - p.gammaL[n - 1 - i]) <= 1e-12 * p.gammaR[i]);
        sum += p.gammaR[i] + p.gammaL[i];
    }
    CHECK(p.gammaR[a.index_of(0)] == p.gammaL[a.index_of(0)]);
    CHECK(std::abs(p.gamma_bar - sum / (2.0 * n)) <= 1e-14 * p.gamma_bar);
}

TEST_CASE("edge-to-edge decay contrast matches the oracle", "[geometry][profile]") {
    const AtomArray a = build_array(ArraySpec{});
    const DecayProfile p = decay_profile(a, default_mode(), kGeom);
    const oracle::Fiber og{250.0, 1.4525, 1.0, 852.0};
    const oracle::Mode om = oracle::complete(og, oracle::scan_beta(og, 100000));
    const double top = oracle::decay_rate(og, om, 250.0 + a.dist_top[a.index_of(20)]);
    const double far = oracle::decay_rate(og, om, 250.0 + a.dist_top[a.index_of(-20)]);
    const double ratio = p.gammaR[a.index_of(20)] / p.gammaR[a.index_of(-20)];
    CHECK(ratio > 100.0);
    CHECK(ratio == Approx(top / far).epsilon(1e-8));
}

TEST_CASE("vanishing disorder converges to the clean profile", "[geometry][disorder][property]") {
    const AtomArray clean = build_array(ArraySpec{});
    const DecayProfile p0 = decay_profile(clean, default_mode(), kGeom);
    const DecayProfile p1 = decay_profile(apply_disorder(clean, DisorderSpec{1e-6, 9, 1}, 0), default_mode(), kGeom);
    for (int i = 0; i < p0.size(); ++i) {
        CHECK(std::abs(p1.gammaR[i] - p0.gammaR[i]) < 1e-7 * p0.gammaR[i]);
        CHECK(std::abs(p1.gammaL[i] - p0.gammaL[i]) < 1e-7 * p0.gammaL[i]);
    }
}
