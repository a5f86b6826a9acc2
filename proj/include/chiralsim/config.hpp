#pragma once

// Run configuration: strict YAML ingestion and the echoed effective config.
//
// Every key is optional; absent keys take the defaults of the N = 41 system.
// Unknown keys, wrong types and invalid geometries are reported with the
// dotted key path and the source line.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "chiralsim/errors.hpp"
#include "chiralsim/pipeline.hpp"
#include "chiralsim/sweep.hpp"

namespace chiralsim {

struct EvolveSettings {
    SourceSpec source;
    double t_end = 50.0;  ///< gamma_bar^-1
    double dt = 0.0;      ///< 0 selects the stability guard
    int stride = 100;

    bool operator==(const EvolveSettings&) const = default;
};

struct IoSettings {
    std::string out = "out";
    bool plots = false;
    std::string units = "gamma_bar";  ///< or gamma0
    int threads = 1;

    bool operator==(const IoSettings&) const = default;
};

struct RunConfig {
    Scenario scenario;
    EvolveSettings evolve;
    DisorderSpec disorder;  ///< seed mirrors RunConfig::seed
    std::optional<SweepSpec> sweep;
    IoSettings io;
    std::uint64_t seed = 0;

    bool operator==(const RunConfig&) const = default;
};

inline std::string_view to_string(Orientation o) {
    return o == Orientation::PositiveTowardTop ? "positive_toward_top" : "negative_toward_top";
}

namespace config_detail {

inline int line_of(const YAML::Node& n) { return n.IsDefined() && n.Mark().line >= 0 ? n.Mark().line + 1 : 0; }

inline std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

inline void require_map(const YAML::Node& n, const std::string& path) {
    if (!n.IsMap()) throw ConfigError(path, line_of(n), "expected a mapping");
}

inline void check_keys(const YAML::Node& n, const std::string& path, std::initializer_list<const char*> allowed) {
    for (const auto& kv : n) {
        const std::string key = kv.first.as<std::string>();
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
            throw ConfigError(join(path, key), line_of(kv.first), "unknown key");
    }
}

template <class T>
const char* type_name() {
    if constexpr (std::is_same_v<T, bool>) return "a boolean";
    else if constexpr (std::is_integral_v<T>) return "an integer";
    else if constexpr (std::is_floating_point_v<T>) return "a number";
    else return "a string";
}

template <class T>
T read(const YAML::Node& n, const std::string& path) {
    if (!n.IsScalar()) throw ConfigError(path, line_of(n), std::string("expected ") + type_name<T>());
    try {
        return n.as<T>();
    } catch (const YAML::BadConversion&) {
        throw ConfigError(path, line_of(n), std::string("expected ") + type_name<T>() + ", got '" + n.Scalar() + "'");
    }
}

template <class T>
void maybe(const YAML::Node& parent, const std::string& path, const char* key, T& out) {
    const YAML::Node n = parent[key];
    if (n && !n.IsNull()) out = read<T>(n, join(path, key));
}

inline std::vector<double> read_list(const YAML::Node& n, const std::string& path) {
    if (!n.IsSequence()) throw ConfigError(path, line_of(n), "expected a list of numbers");
    std::vector<double> v;
    for (std::size_t i = 0; i < n.size(); ++i) v.push_back(read<double>(n[i], path + "[" + std::to_string(i) + "]"));
    return v;
}

/// Wraps validation failures of a section into a ConfigError.
template <class F>
void validated(const YAML::Node& n, const std::string& path, F&& f) {
    try {
        f();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(path, line_of(n), e.what());
    }
}

inline void parse_fiber(const YAML::Node& n, FiberGeometry& g, Dipole& dip) {
    const std::string p = "fiber";
    require_map(n, p);
    check_keys(n, p, {"a", "n1", "n2", "lambda0", "dipole", "rate_scale"});
    maybe(n, p, "a", g.a);
    maybe(n, p, "n1", g.n1);
    maybe(n, p, "n2", g.n2);
    maybe(n, p, "lambda0", g.lambda0);
    maybe(n, p, "rate_scale", dip.rate_scale);
    if (const YAML::Node d = n["dipole"]; d && !d.IsNull()) {
        const auto v = read_list(d, p + ".dipole");
        if (v.size() != 3) throw ConfigError(p + ".dipole", line_of(d), "expected three components (r, phi, z)");
        dip.direction = std::array<double, 3>{v[0], v[1], v[2]};
        const double len = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
        if (std::abs(len - 1.0) > 1e-9) throw ConfigError(p + ".dipole", line_of(d), "dipole must be a unit vector");
    }
    if (!(dip.rate_scale > 0.0)) throw ConfigError(p + ".rate_scale", line_of(n["rate_scale"]), "must be > 0");
    validated(n, p, [&] { g.validate(); });
}

inline void parse_geometry(const YAML::Node& n, ArraySpec& s) {
    const std::string p = "geometry";
    require_map(n, p);
    check_keys(n, p, {"N", "d", "D", "theta", "y0", "H", "lambda0", "orientation", "allow_close_spacing"});
    maybe(n, p, "N", s.N);
    maybe(n, p, "d", s.d);
    maybe(n, p, "lambda0", s.lambda0);
    maybe(n, p, "allow_close_spacing", s.allow_close_spacing);
    if (const YAML::Node o = n["orientation"]; o && !o.IsNull()) {
        const auto v = read<std::string>(o, p + ".orientation");
        if (v == "positive_toward_top") s.orientation = Orientation::PositiveTowardTop;
        else if (v == "negative_toward_top") s.orientation = Orientation::NegativeTowardTop;
        else throw ConfigError(p + ".orientation", line_of(o), "expected positive_toward_top or negative_toward_top");
    }
    const bool has_y0 = n["y0"] && !n["y0"].IsNull(), has_H = n["H"] && !n["H"].IsNull();
    if (has_y0 != has_H) throw ConfigError(p, line_of(n), "y0 and H must be given together");
    if (has_y0) {
        if (n["theta"] && !n["theta"].IsNull())
            throw ConfigError(p + ".theta", line_of(n["theta"]), "give either theta or (y0, H), not both");
        const double y0 = read<double>(n["y0"], p + ".y0"), H = read<double>(n["H"], p + ".H");
        if (!(y0 > 0.0)) throw ConfigError(p + ".y0", line_of(n["y0"]), "must be > 0");
        if (!(H >= 0.0)) throw ConfigError(p + ".H", line_of(n["H"]), "must be >= 0");
        const ArraySpec e = ArraySpec::from_extent(s.N, s.d, y0, H, s.lambda0, s.orientation);
        if (n["D"] && !n["D"].IsNull()) {
            const double D = read<double>(n["D"], p + ".D");
            if (std::abs(D - e.D) > 1e-9 * e.D) throw ConfigError(p + ".D", line_of(n["D"]), "D must equal H + 2 y0");
        }
        s.D = e.D;
        s.theta = e.theta;
    } else {
        maybe(n, p, "D", s.D);
        maybe(n, p, "theta", s.theta);
    }
    validated(n, p, [&] { s.validate(); });
}

inline void parse_model(const YAML::Node& n, ModelSpec& m, PhaseReference& phase, int N) {
    const std::string p = "model";
    require_map(n, p);
    check_keys(n, p, {"variant", "phase", "detuning", "gamma0"});
    if (const YAML::Node v = n["variant"]; v && !v.IsNull())
        validated(v, p + ".variant", [&] { m.variant = variant_from_string(read<std::string>(v, p + ".variant")); });
    if (const YAML::Node v = n["phase"]; v && !v.IsNull())
        validated(v, p + ".phase", [&] { phase = phase_reference_from_string(read<std::string>(v, p + ".phase")); });
    if (const YAML::Node v = n["detuning"]; v && !v.IsNull()) {
        m.detuning = read_list(v, p + ".detuning");
        if (!m.detuning.empty() && static_cast<int>(m.detuning.size()) != N)
            throw ConfigError(p + ".detuning", line_of(v), "expected " + std::to_string(N) + " values (one per atom)");
    }
    maybe(n, p, "gamma0", m.gamma0);
    validated(n, p, [&] { m.validate(); });
}

inline void parse_source(const YAML::Node& n, EvolveSettings& e, int N) {
    const std::string p = "source";
    require_map(n, p);
    check_keys(n, p, {"j_s", "t_s", "tau_w", "omega_s", "amplitude", "t_end", "dt", "stride"});
    maybe(n, p, "j_s", e.source.j_s);
    maybe(n, p, "t_s", e.source.t_s);
    maybe(n, p, "tau_w", e.source.tau_w);
    maybe(n, p, "omega_s", e.source.omega_s);
    maybe(n, p, "amplitude", e.source.amplitude);
    maybe(n, p, "t_end", e.t_end);
    maybe(n, p, "dt", e.dt);
    maybe(n, p, "stride", e.stride);
    validated(n, p, [&] {
        e.source.validate(-(N - 1) / 2, N);
        if (!(e.t_end > 0.0)) throw std::invalid_argument("t_end must be > 0");
        if (!(e.dt >= 0.0)) throw std::invalid_argument("dt must be >= 0 (0 selects the guard)");
        if (e.stride < 1) throw std::invalid_argument("stride must be >= 1");
    });
}

inline void parse_disorder(const YAML::Node& n, DisorderSpec& d) {
    const std::string p = "disorder";
    require_map(n, p);
    check_keys(n, p, {"delta", "samples"});
    maybe(n, p, "delta", d.delta);
    maybe(n, p, "samples", d.n_samples);
    if (!(d.delta >= 0.0)) throw ConfigError(p + ".delta", line_of(n["delta"]), "must be >= 0");
    if (d.n_samples < 1) throw ConfigError(p + ".samples", line_of(n["samples"]), "must be >= 1");
}

inline void parse_sweep(const YAML::Node& n, SweepSpec& s) {
    const std::string p = "sweep";
    require_map(n, p);
    check_keys(n, p, {"axes", "base", "metrics", "samples"});
    const YAML::Node axes = n["axes"];
    if (!axes || !axes.IsSequence()) throw ConfigError(p + ".axes", line_of(n), "expected a list of axes");
    s.axes.clear();
    for (std::size_t i = 0; i < axes.size(); ++i) {
        const std::string ap = p + ".axes[" + std::to_string(i) + "]";
        const YAML::Node a = axes[i];
        require_map(a, ap);
        check_keys(a, ap, {"param", "values", "start", "stop", "step"});
        SweepAxis axis;
        if (!a["param"]) throw ConfigError(ap + ".param", line_of(a), "missing");
        validated(a["param"], ap + ".param",
                  [&] { axis.param = sweep_param_from_string(read<std::string>(a["param"], ap + ".param")); });
        if (a["values"]) {
            if (a["start"] || a["stop"] || a["step"])
                throw ConfigError(ap, line_of(a), "give either values or start/stop/step");
            axis.values = read_list(a["values"], ap + ".values");
        } else {
            if (!a["start"] || !a["stop"] || !a["step"])
                throw ConfigError(ap, line_of(a), "expected values or start/stop/step");
            const double lo = read<double>(a["start"], ap + ".start"), hi = read<double>(a["stop"], ap + ".stop"),
                         st = read<double>(a["step"], ap + ".step");
            if (!(st > 0.0) || hi < lo) throw ConfigError(ap, line_of(a), "need step > 0 and stop >= start");
            const long count = std::lround(std::floor((hi - lo) / st + 1e-9)) + 1;
            for (long k = 0; k < count; ++k) axis.values.push_back(lo + k * st);
        }
        s.axes.push_back(std::move(axis));
    }
    if (const YAML::Node b = n["base"]; b && !b.IsNull()) {
        const std::string bp = p + ".base";
        require_map(b, bp);
        check_keys(b, bp, {"y0_over_a", "H_over_a", "d_over_lambda", "N", "delta"});
        maybe(b, bp, "y0_over_a", s.base.y0_over_a);
        maybe(b, bp, "H_over_a", s.base.H_over_a);
        maybe(b, bp, "d_over_lambda", s.base.d_over_lambda);
        maybe(b, bp, "N", s.base.N);
        maybe(b, bp, "delta", s.base.delta);
    }
    if (const YAML::Node m = n["metrics"]; m && !m.IsNull()) {
        if (!m.IsSequence()) throw ConfigError(p + ".metrics", line_of(m), "expected a list of metric names");
        s.metrics.clear();
        for (std::size_t i = 0; i < m.size(); ++i)
            s.metrics.push_back(read<std::string>(m[i], p + ".metrics[" + std::to_string(i) + "]"));
    }
    maybe(n, p, "samples", s.samples);
    validated(n, p, [&] { s.validate(); });
}

inline void parse_io(const YAML::Node& n, IoSettings& io) {
    const std::string p = "io";
    require_map(n, p);
    check_keys(n, p, {"out", "plots", "units", "threads"});
    maybe(n, p, "out", io.out);
    maybe(n, p, "plots", io.plots);
    maybe(n, p, "units", io.units);
    maybe(n, p, "threads", io.threads);
    if (io.units != "gamma_bar" && io.units != "gamma0")
        throw ConfigError(p + ".units", line_of(n["units"]), "expected gamma_bar or gamma0");
    if (io.threads < 1) throw ConfigError(p + ".threads", line_of(n["threads"]), "must be >= 1");
}

} // namespace config_detail

inline RunConfig default_config() {
    RunConfig c;
    c.disorder.delta = 2.0 * c.scenario.array.theta * c.scenario.array.d;
    c.disorder.n_samples = 20;
    return c;
}

inline RunConfig parse_config_string(const std::string& text) {
    using namespace config_detail;
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        throw ConfigError("", e.mark.line >= 0 ? e.mark.line + 1 : 0, "malformed YAML: " + e.msg);
    }
    RunConfig c = default_config();
    if (root.IsNull()) {
        c.scenario.array.validate();
        return c;
    }
    require_map(root, "");
    check_keys(root, "", {"seed", "fiber", "geometry", "model", "source", "disorder", "sweep", "io"});
    maybe(root, "", "seed", c.seed);

    auto section = [&](const char* key) {
        const YAML::Node n = root[key];
        return n && !n.IsNull() ? std::optional<YAML::Node>(n) : std::nullopt;
    };
    if (auto n = section("fiber")) parse_fiber(*n, c.scenario.fiber, c.scenario.dipole);
    if (auto n = section("geometry")) parse_geometry(*n, c.scenario.array);
    else c.scenario.array.validate();
    c.disorder.delta = 2.0 * c.scenario.array.theta * c.scenario.array.d;
    if (auto n = section("model")) parse_model(*n, c.scenario.model, c.scenario.phase, c.scenario.array.N);
    c.scenario.model.k = 2.0 * std::numbers::pi / c.scenario.array.lambda0;
    if (auto n = section("source")) parse_source(*n, c.evolve, c.scenario.array.N);
    if (auto n = section("disorder")) parse_disorder(*n, c.disorder);
    if (auto n = section("sweep")) {
        SweepSpec s;
        parse_sweep(*n, s);
        c.sweep = s;
    }
    if (auto n = section("io")) parse_io(*n, c.io);
    c.disorder.seed = c.seed;
    if (c.sweep) c.sweep->seed = c.seed;
    return c;
}

inline RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", 0, "cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_string(ss.str());
}

/// Shortest decimal form that parses back to the same double.
inline std::string exact(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    std::string s(buf, r.ptr);
    if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
    return s;
}

inline std::string list(const std::vector<double>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + exact(v[i]);
    return s + "]";
}

/// The fully resolved configuration as YAML; parsing it yields an equal RunConfig.
inline std::string emit_config(const RunConfig& c) {
    const auto& f = c.scenario.fiber;
    const auto& g = c.scenario.array;
    const auto& m = c.scenario.model;
    const auto& e = c.evolve;
    std::ostringstream os;
    os << "seed: " << c.seed << "\n";
    os << "fiber:\n  a: " << exact(f.a) << "\n  n1: " << exact(f.n1) << "\n  n2: " << exact(f.n2)
       << "\n  lambda0: " << exact(f.lambda0) << "\n";
    if (c.scenario.dipole.direction) {
        const auto& d = *c.scenario.dipole.direction;
        os << "  dipole: " << list({d[0], d[1], d[2]}) << "\n";
    }
    os << "  rate_scale: " << exact(c.scenario.dipole.rate_scale) << "\n";
    os << "geometry:\n  N: " << g.N << "\n  d: " << exact(g.d) << "\n  D: " << exact(g.D) << "\n  theta: "
       << exact(g.theta) << "\n  lambda0: " << exact(g.lambda0) << "\n  orientation: " << to_string(g.orientation)
       << "\n  allow_close_spacing: " << (g.allow_close_spacing ? "true" : "false") << "\n";
    os << "model:\n  variant: " << to_string(m.variant) << "\n  phase: " << to_string(c.scenario.phase)
       << "\n  detuning: " << list(m.detuning) << "\n  gamma0: " << exact(m.gamma0) << "\n";
    os << "source:\n  j_s: " << e.source.j_s << "\n  t_s: " << exact(e.source.t_s) << "\n  tau_w: "
       << exact(e.source.tau_w) << "\n  omega_s: " << exact(e.source.omega_s) << "\n  amplitude: "
       << exact(e.source.amplitude) << "\n  t_end: " << exact(e.t_end) << "\n  dt: " << exact(e.dt)
       << "\n  stride: " << e.stride << "\n";
    os << "disorder:\n  delta: " << exact(c.disorder.delta) << "\n  samples: " << c.disorder.n_samples << "\n";
    if (c.sweep) {
        const auto& s = *c.sweep;
        os << "sweep:\n  axes:\n";
        for (const auto& a : s.axes) os << "    - param: " << to_string(a.param) << "\n      values: " << list(a.values) << "\n";
        os << "  base:\n    y0_over_a: " << exact(s.base.y0_over_a) << "\n    H_over_a: " << exact(s.base.H_over_a)
           << "\n    d_over_lambda: " << exact(s.base.d_over_lambda) << "\n    N: " << s.base.N
           << "\n    delta: " << exact(s.base.delta) << "\n  metrics: [";
        for (std::size_t i = 0; i < s.metrics.size(); ++i) os << (i ? ", " : "") << s.metrics[i];
        os << "]\n  samples: " << s.samples << "\n";
    }
    os << "io:\n  out: \"" << c.io.out << "\"\n  plots: " << (c.io.plots ? "true" : "false") << "\n  units: "
       << c.io.units << "\n  threads: " << c.io.threads << "\n";
    return os.str();
}

} // namespace chiralsim
