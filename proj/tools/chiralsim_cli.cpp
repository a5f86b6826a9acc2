// chiralsim: command-line front end.
//
//   chiralsim <modes|spectrum|evolve|disorder|sweep> [--config FILE] [--out DIR]
//             [--seed N] [--threads N] [--plots on|off] [--units gamma_bar|gamma0]
//             [--js J] [--delta NM] [--samples N]
//
// Every run writes effective_config.yaml next to its tables. Failures write
// error.json and exit with status 2.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "chiralsim/chiralsim.hpp"

namespace fs = std::filesystem;
using namespace chiralsim;

namespace {

struct Context {
    RunConfig cfg;
    fs::path out;
    std::string digest;
    bool gamma0_units = false;
};

/// Digest of the physics-relevant config; io settings (threads, paths, plots) are excluded.
std::string physics_digest(const RunConfig& c) {
    RunConfig copy = c;
    copy.io = IoSettings{};
    return io::config_digest(copy);
}

void write_svg(const Context& ctx, const std::string& name, const std::string& svg) {
    if (ctx.cfg.io.plots) io::write_text(ctx.out / name, svg);
}

std::vector<std::string> row(std::initializer_list<double> vals) {
    std::vector<std::string> r;
    for (double v : vals) r.push_back(io::num(v));
    return r;
}

void cmd_modes(const Context& ctx) {
    const Scenario& sc = ctx.cfg.scenario;
    const FiberMode m = solve_propagation_constant(sc.fiber);
    const auto eq = fiber::eigen_equation(sc.fiber, m.beta);

    io::Table fm{"guided HE11 mode", {"beta", "n_eff", "q", "h", "s", "C", "relative_residual"},
                 {"1/nm", "-", "1/nm", "1/nm", "-", "1/nm", "-"}, {}};
    fm.add(row({m.beta, m.beta / sc.fiber.k0(), m.q, m.h, m.s_param, m.C, eq.relative_residual()}));
    io::write_csv(ctx.out / "fiber_mode.csv", fm, ctx.digest);

    io::Table curve{"decay rate into one guide vs surface distance", {"r_minus_a", "gamma"}, {"nm", "gamma0"}, {}};
    std::vector<double> xs, ys;
    for (int k = 1; k <= 500; ++k) {
        const double dr = static_cast<double>(k);
        const double g = decay_rate(m, sc.fiber, sc.fiber.a + dr, sc.dipole);
        curve.add(row({dr, g}));
        xs.push_back(dr);
        ys.push_back(g);
    }
    io::write_csv(ctx.out / "decay_curve.csv", curve, ctx.digest);
    write_svg(ctx, "decay_curve.svg", io::svg_lines({{"gamma/gamma0", xs, ys}}, "guided decay rate", "r - a (nm)", "gamma / gamma0"));

    const AtomArray atoms = build_array(sc.array);
    const DecayProfile p = decay_profile(atoms, m, sc.fiber, sc.dipole);
    io::Table arr{"atom array and per-atom guided decay rates",
                  {"j", "x", "y", "dist_top", "dist_bottom", "gammaR", "gammaL"},
                  {"site", "nm", "nm", "nm", "nm", "gamma0", "gamma0"}, {}};
    for (int i = 0; i < atoms.size(); ++i)
        arr.add(row({static_cast<double>(atoms.j[i]), atoms.x[i], atoms.y[i], atoms.dist_top[i], atoms.dist_bottom[i],
                     p.gammaR[i], p.gammaL[i]}));
    io::write_csv(ctx.out / "array.csv", arr, ctx.digest);
    for (const auto& w : atoms.warnings) std::cerr << "warning: " << w << "\n";
}

void cmd_spectrum(const Context& ctx) {
    const System sys = build_system(ctx.cfg.scenario);
    const Spectrum sp = analyze(sys);
    const double scale = ctx.gamma0_units ? sys.gamma_bar : 1.0;
    const std::string u = ctx.gamma0_units ? "gamma0" : "gamma_bar";
    const std::string ut = ctx.gamma0_units ? "1/gamma0" : "1/gamma_bar";

    io::Table ev{"eigenvalues sorted by collective decay -Im(E)", {"m", "re_E", "im_E", "subradiant"},
                 {"-", u, u, "bool"}, {}};
    for (const auto& m : sp.modes)
        ev.add({std::to_string(m.m), io::num(m.E.real() * scale), io::num(m.E.imag() * scale), m.is_subradiant ? "1" : "0"});
    io::write_csv(ctx.out / "eigenvalues.csv", ev, ctx.digest);

    io::Table in{"mode intensities |psi_j|^2", {"m"}, {"-"}, {}};
    for (int i = 0; i < sys.atoms.size(); ++i) {
        in.columns.push_back("j" + std::to_string(sys.atoms.j[i]));
        in.units.push_back("-");
    }
    for (const auto& m : sp.modes) {
        std::vector<std::string> r{std::to_string(m.m)};
        for (double v : m.intensity) r.push_back(io::num(v));
        in.add(std::move(r));
    }
    io::write_csv(ctx.out / "intensity.csv", in, ctx.digest);

    io::Table per{"per-mode Gaussian fit and lifetime",
                  {"m", "fwhm", "center", "sigma", "fit_residual", "clamped", "poor_fit", "tau", "centroid"},
                  {"-", "sites", "site", "sites", "-", "bool", "bool", ut, "site"}, {}};
    for (std::size_t k = 0; k < sp.modes.size(); ++k) {
        const auto& m = sp.modes[k];
        const auto& f = sp.metrics.fits[k];
        per.add({std::to_string(m.m), io::num(f.fwhm), io::num(f.center), io::num(f.sigma), io::num(f.relative_residual),
                 f.clamped ? "1" : "0", f.poor_fit ? "1" : "0", io::num(lifetime(m) / scale),
                 io::num(spectral::centroid(m.intensity, sp.j_min))});
    }
    io::write_csv(ctx.out / "mode_metrics.csv", per, ctx.digest);

    const auto& s = sp.metrics;
    io::Table sum{"spectrum summary (widths over well-fitted subradiant modes)",
                  {"gamma_bar", "n_subradiant", "n_superradiant", "n_excluded", "fwhm_min", "fwhm_avg", "tau_avg"},
                  {"gamma0", "-", "-", "-", "sites", "sites", ut}, {}};
    sum.add(row({sys.gamma_bar, double(s.n_subradiant), double(s.n_superradiant), double(s.n_excluded), s.fwhm_min,
                 s.fwhm_avg, s.tau_avg / scale}));
    io::write_csv(ctx.out / "metrics.csv", sum, ctx.digest);

    io::Table mat{"Hamiltonian entries", {"row_j", "col_j", "re", "im"}, {"site", "site", "gamma0", "gamma0"}, {}};
    for (int r = 0; r < sys.H.size(); ++r)
        for (int c = 0; c < sys.H.size(); ++c)
            mat.add(row({double(sys.atoms.j[r]), double(sys.atoms.j[c]), sys.H.entries(r, c).real(),
                         sys.H.entries(r, c).imag()}));
    io::write_csv(ctx.out / "hamiltonian.csv", mat, ctx.digest);

    if (ctx.cfg.io.plots) {
        std::vector<double> re, dec;
        std::vector<bool> sub;
        std::vector<std::vector<double>> z;
        for (const auto& m : sp.modes) {
            re.push_back(m.E.real() * scale);
            dec.push_back(m.decay() * scale);
            sub.push_back(m.is_subradiant);
            z.push_back(m.intensity);
        }
        write_svg(ctx, "spectrum.svg", io::svg_scatter(re, dec, sub, "eigenvalues (red: subradiant)", "Re E", "-Im E", true));
        write_svg(ctx, "intensity.svg", io::svg_heatmap(z, sys.atoms.j.front(), sys.atoms.j.back(), 1, double(z.size()),
                                                        "mode intensity |psi_j|^2", "j", "m"));
    }
}

void cmd_evolve(const Context& ctx) {
    const System sys = build_system(ctx.cfg.scenario);
    const EvolveSettings& e = ctx.cfg.evolve;
    const double dt = e.dt > 0.0 ? e.dt : max_stable_dt(sys.H_scaled);
    EvolveOptions opt;
    opt.stride = e.stride;
    const Trajectory tr = evolve(sys.H_scaled, sys.j_min(), e.source, e.t_end, dt, opt);
    const FunnelingMetrics fm = funneling_metrics(tr, e.source.off_time());

    io::Table amp{"amplitudes v_j(t)", {"t", "j", "re_v", "im_v", "intensity"}, {"1/gamma_bar", "site", "-", "-", "-"}, {}};
    for (std::size_t k = 0; k < tr.frames(); ++k)
        for (int i = 0; i < sys.atoms.size(); ++i) {
            const cplx v = tr.v[k](i);
            amp.add(row({tr.times[k], double(sys.atoms.j[i]), v.real(), v.imag(), std::norm(v)}));
        }
    io::write_csv(ctx.out / "amplitudes.csv", amp, ctx.digest);

    io::Table obs{"total power, centroid and RMS width", {"t", "P", "centroid", "rms_width"},
                  {"1/gamma_bar", "-", "site", "sites"}, {}};
    for (std::size_t k = 0; k < fm.times.size(); ++k) obs.add(row({fm.times[k], fm.power[k], fm.centroid[k], fm.rms_width[k]}));
    io::write_csv(ctx.out / "observables.csv", obs, ctx.digest);

    io::Table fit{"late-time exponential fit of P(t)", {"fit_from", "decay_rate", "r_squared"},
                  {"1/gamma_bar", "gamma_bar", "-"}, {}};
    fit.add(row({e.source.off_time(), fm.decay_rate, fm.fit_r_squared}));
    io::write_csv(ctx.out / "decay_fit.csv", fit, ctx.digest);

    if (ctx.cfg.io.plots) {
        std::vector<std::vector<double>> z;
        for (std::size_t k = 0; k < tr.frames(); ++k) {
            auto I = tr.intensity(k);
            const double mx = *std::max_element(I.begin(), I.end());
            for (double& v : I) v = mx > 0 ? v / mx : 0.0;
            z.push_back(I);
        }
        write_svg(ctx, "evolve.svg", io::svg_heatmap(z, sys.atoms.j.front(), sys.atoms.j.back(), 0, e.t_end,
                                                     "normalized intensity I_j(t) / max_j I_j(t)", "j", "t"));
    }
}

void cmd_disorder(const Context& ctx) {
    const Scenario& sc = ctx.cfg.scenario;
    const FiberMode mode = solve_propagation_constant(sc.fiber);
    const EnsembleStats st = disorder_ensemble(sc, mode, ctx.cfg.disorder, ctx.cfg.io.threads);

    io::Table per{"per-sample spectrum metrics (gamma_bar of the clean array)",
                  {"sample", "fwhm_min", "fwhm_avg", "tau_avg", "n_subradiant", "n_excluded", "max_subradiant_centroid"},
                  {"-", "sites", "sites", "1/gamma_bar", "-", "-", "sites"}, {}};
    for (const auto& s : st.samples)
        per.add(row({double(s.sample_index), s.metrics.fwhm_min, s.metrics.fwhm_avg, s.metrics.tau_avg,
                     double(s.metrics.n_subradiant), double(s.metrics.n_excluded), s.max_subradiant_centroid}));
    io::write_csv(ctx.out / "disorder_samples.csv", per, ctx.digest);

    io::Table ens{"ensemble mean and sample standard deviation", {"metric", "mean", "std"}, {"-", "-", "-"}, {}};
    ens.add({"delta_nm", io::num(st.disorder.delta), "0"});
    ens.add({"fwhm_min", io::num(st.fwhm_min_mean), io::num(st.fwhm_min_std)});
    ens.add({"fwhm_avg", io::num(st.fwhm_avg_mean), io::num(st.fwhm_avg_std)});
    ens.add({"tau_avg", io::num(st.tau_avg_mean), io::num(st.tau_avg_std)});
    ens.add({"n_subradiant", io::num(st.n_subradiant_mean), io::num(st.n_subradiant_std)});
    io::write_csv(ctx.out / "disorder_ensemble.csv", ens, ctx.digest);
}

void cmd_sweep(const Context& ctx) {
    if (!ctx.cfg.sweep) throw ConfigError("sweep", 0, "the sweep subcommand needs a 'sweep' section");
    const SweepSpec& spec = *ctx.cfg.sweep;
    const SweepResult res = run_sweep(spec, ctx.cfg.scenario, ctx.cfg.io.threads);

    io::Table t{"sweep results in grid order", {}, {}, {}};
    for (const auto& a : spec.axes) {
        t.columns.push_back(std::string(to_string(a.param)));
        t.units.push_back(a.param == SweepParam::Delta ? "nm" : "-");
    }
    for (const auto& m : spec.metrics) {
        t.columns.push_back(m);
        t.units.push_back(m.starts_with("fwhm") ? "sites" : m == "tau_avg" ? "1/gamma_bar" : "-");
    }
    t.columns.push_back("error");
    t.units.push_back("-");
    const auto pts = grid_points(spec);
    for (std::size_t i = 0; i < res.rows.size(); ++i) {
        std::vector<std::string> r;
        for (const auto& a : spec.axes) {
            const auto& p = pts[i];
            switch (a.param) {
            case SweepParam::Y0OverA: r.push_back(io::num(p.y0_over_a)); break;
            case SweepParam::HOverA: r.push_back(io::num(p.H_over_a)); break;
            case SweepParam::DOverLambda: r.push_back(io::num(p.d_over_lambda)); break;
            case SweepParam::N: r.push_back(std::to_string(p.N)); break;
            case SweepParam::Delta: r.push_back(io::num(p.delta)); break;
            }
        }
        for (const auto& m : spec.metrics) r.push_back(io::num(res.rows[i].metric(m)));
        std::string err = res.rows[i].error;
        for (char& c : err)
            if (c == ',' || c == '\n') c = ';';
        r.push_back(err);
        t.add(std::move(r));
    }
    io::write_csv(ctx.out / "sweep.csv", t, ctx.digest);
    for (const auto& r : res.rows)
        if (!r.error.empty()) std::cerr << "warning: sweep point failed: " << r.error << "\n";

    if (ctx.cfg.io.plots && !spec.metrics.empty()) {
        const std::string& metric = spec.metrics.front();
        if (spec.axes.size() == 1) {
            std::vector<double> ys;
            for (const auto& r : res.rows) ys.push_back(r.metric(metric));
            write_svg(ctx, "sweep.svg", io::svg_lines({{metric, spec.axes[0].values, ys}}, metric, std::string(to_string(spec.axes[0].param)), metric));
        } else {
            const auto& a0 = spec.axes[0].values;
            const auto& a1 = spec.axes[1].values;
            std::vector<std::vector<double>> z(a0.size(), std::vector<double>(a1.size()));
            for (std::size_t i = 0; i < a0.size(); ++i)
                for (std::size_t j = 0; j < a1.size(); ++j) z[i][j] = res.rows[i * a1.size() + j].metric(metric);
            write_svg(ctx, "sweep.svg", io::svg_heatmap(z, a1.front(), a1.back(), a0.front(), a0.back(), metric,
                                                        std::string(to_string(spec.axes[1].param)),
                                                        std::string(to_string(spec.axes[0].param))));
        }
    }
}

void write_error(const fs::path& out, const std::string& kind, const std::exception& e) {
    nlohmann::json j{{"status", "error"}, {"error", kind}, {"message", e.what()}};
    if (const auto* ce = dynamic_cast<const ConfigError*>(&e)) {
        j["key"] = ce->key_path();
        j["line"] = ce->line();
    }
    try {
        io::write_text(out / "error.json", j.dump(2) + "\n");
    } catch (...) {
    }
    std::cerr << "error (" << kind << "): " << e.what() << "\n";
}

std::string classify(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e)) return "config";
    if (dynamic_cast<const GeometryError*>(&e)) return "geometry";
    if (dynamic_cast<const DomainError*>(&e)) return "domain";
    if (dynamic_cast<const NoRootError*>(&e)) return "no_root";
    if (dynamic_cast<const ConvergenceError*>(&e)) return "convergence";
    if (dynamic_cast<const InstabilityError*>(&e)) return "instability";
    if (dynamic_cast<const std::invalid_argument*>(&e)) return "invalid_argument";
    return "runtime";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tilted atomic array between two chiral waveguides: spectra, dynamics, disorder and sweeps"};
    app.require_subcommand(1, 1);

    std::string config_path, out_dir, plots, units;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads, js, samples;
    std::optional<double> delta;

    app.add_option("--config", config_path, "YAML run configuration")->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "output directory (default from config, else ./out)");
    app.add_option("--seed", seed, "RNG seed");
    app.add_option("--threads", threads, "worker threads for sweeps and ensembles")->check(CLI::PositiveNumber);
    app.add_option("--plots", plots, "emit SVG plots")->check(CLI::IsMember({"on", "off"}));
    app.add_option("--units", units, "eigenvalue units")->check(CLI::IsMember({"gamma_bar", "gamma0"}));

    auto* modes = app.add_subcommand("modes", "guided mode, decay-rate curve and per-atom rates");
    auto* spectrum = app.add_subcommand("spectrum", "eigenvalues, mode intensities and width metrics");
    auto* evolve_cmd = app.add_subcommand("evolve", "driven dynamics from a Gaussian source");
    evolve_cmd->add_option("--js", js, "driven atom index");
    auto* disorder = app.add_subcommand("disorder", "vertical-disorder ensemble");
    disorder->add_option("--delta", delta, "disorder amplitude (nm)");
    disorder->add_option("--samples", samples, "ensemble size")->check(CLI::PositiveNumber);
    auto* sweep = app.add_subcommand("sweep", "parameter sweep from the config's sweep section");

    CLI11_PARSE(app, argc, argv);

    Context ctx;
    ctx.out = out_dir.empty() ? fs::path("out") : fs::path(out_dir);
    try {
        ctx.cfg = config_path.empty() ? default_config() : parse_config(config_path);
        if (out_dir.empty()) ctx.out = ctx.cfg.io.out;
        ctx.cfg.io.out = ctx.out.string();
        if (seed) {
            ctx.cfg.seed = *seed;
            ctx.cfg.disorder.seed = *seed;
            if (ctx.cfg.sweep) ctx.cfg.sweep->seed = *seed;
        }
        if (threads) ctx.cfg.io.threads = *threads;
        if (!plots.empty()) ctx.cfg.io.plots = plots == "on";
        if (!units.empty()) ctx.cfg.io.units = units;
        if (js) {
            ctx.cfg.evolve.source.j_s = *js;
            ctx.cfg.evolve.source.validate(-ctx.cfg.scenario.array.half(), ctx.cfg.scenario.array.N);
        }
        if (delta) {
            if (!(*delta >= 0.0)) throw ConfigError("disorder.delta", 0, "must be >= 0");
            ctx.cfg.disorder.delta = *delta;
        }
        if (samples) ctx.cfg.disorder.n_samples = *samples;
        ctx.gamma0_units = ctx.cfg.io.units == "gamma0";
        ctx.digest = physics_digest(ctx.cfg);

        fs::create_directories(ctx.out);
        fs::remove(ctx.out / "error.json");
        io::write_text(ctx.out / "effective_config.yaml", emit_config(ctx.cfg));

        if (*modes) cmd_modes(ctx);
        else if (*spectrum) cmd_spectrum(ctx);
        else if (*evolve_cmd) cmd_evolve(ctx);
        else if (*disorder) cmd_disorder(ctx);
        else if (*sweep) cmd_sweep(ctx);
    } catch (const std::exception& e) {
        write_error(ctx.out, classify(e), e);
        return 2;
    }
    return 0;
}
