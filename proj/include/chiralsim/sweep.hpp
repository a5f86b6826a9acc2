#pragma once

// Parameter sweeps and disorder ensembles over the chiral array.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "chiralsim/pipeline.hpp"
#include "chiralsim/stats.hpp"

namespace chiralsim {

/// Runs fn(i) for i in [0, n) on up to `threads` workers. Results must be
/// written to per-index slots, so the outcome does not depend on scheduling.
inline void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
    const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(threads, 1)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t i = next++; i < n; i = next++) fn(i);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

enum class SweepParam { Y0OverA, HOverA, DOverLambda, N, Delta };

inline std::string_view to_string(SweepParam p) {
    switch (p) {
    case SweepParam::Y0OverA: return "y0_over_a";
    case SweepParam::HOverA: return "H_over_a";
    case SweepParam::DOverLambda: return "d_over_lambda";
    case SweepParam::N: return "N";
    case SweepParam::Delta: return "delta";
    }
    return "?";
}

inline SweepParam sweep_param_from_string(std::string_view s) {
    for (SweepParam p : {SweepParam::Y0OverA, SweepParam::HOverA, SweepParam::DOverLambda, SweepParam::N,
                         SweepParam::Delta})
        if (to_string(p) == s) return p;
    throw std::invalid_argument("unknown sweep axis '" + std::string(s) + "'");
}

struct SweepAxis {
    SweepParam param = SweepParam::HOverA;
    std::vector<double> values;

    bool operator==(const SweepAxis&) const = default;
};

/// Geometry of a sweep point is set by (y0/a, H/a, d/lambda, N); delta is
/// the vertical disorder amplitude in nm.
struct SweepPoint {
    double y0_over_a = 0.5;
    double H_over_a = 3.0;
    double d_over_lambda = 10.65;
    int N = 41;
    double delta = 0.0;

    bool operator==(const SweepPoint&) const = default;
};

struct SweepSpec {
    std::vector<SweepAxis> axes;  ///< one or two
    SweepPoint base;
    std::vector<std::string> metrics{"fwhm_min", "fwhm_avg", "tau_avg", "n_subradiant"};
    int samples = 1;  ///< disorder samples averaged per point when delta > 0
    std::uint64_t seed = 0;

    std::size_t size() const {
        std::size_t n = 1;
        for (const auto& a : axes) n *= a.values.size();
        return n;
    }

    void validate() const {
        if (axes.empty() || axes.size() > 2) throw std::invalid_argument("sweep: need one or two axes");
        if (axes.size() == 2 && axes[0].param == axes[1].param)
            throw std::invalid_argument("sweep: the two axes must differ");
        for (const auto& a : axes)
            if (a.values.empty()) throw std::invalid_argument("sweep: axis '" + std::string(to_string(a.param)) + "' is empty");
        if (samples < 1) throw std::invalid_argument("sweep: samples must be >= 1");
        static const std::vector<std::string> known{"fwhm_min", "fwhm_avg", "tau_avg", "n_subradiant",
                                                     "n_superradiant", "n_excluded", "skin_fraction"};
        for (const auto& m : metrics)
            if (std::find(known.begin(), known.end(), m) == known.end())
                throw std::invalid_argument("sweep: unknown metric '" + m + "'");
    }

    bool operator==(const SweepSpec&) const = default;
};

struct SweepRow {
    SweepPoint point;
    double fwhm_min = std::numeric_limits<double>::quiet_NaN();
    double fwhm_avg = std::numeric_limits<double>::quiet_NaN();
    double tau_avg = std::numeric_limits<double>::quiet_NaN();
    double n_subradiant = 0.0;
    double n_superradiant = 0.0;
    double n_excluded = 0.0;
    double skin_fraction = std::numeric_limits<double>::quiet_NaN();
    std::string error;  ///< empty on success

    double metric(std::string_view name) const {
        if (name == "fwhm_min") return fwhm_min;
        if (name == "fwhm_avg") return fwhm_avg;
        if (name == "tau_avg") return tau_avg;
        if (name == "n_subradiant") return n_subradiant;
        if (name == "n_superradiant") return n_superradiant;
        if (name == "n_excluded") return n_excluded;
        if (name == "skin_fraction") return skin_fraction;
        throw std::invalid_argument("unknown metric '" + std::string(name) + "'");
    }
};

struct SweepResult {
    SweepSpec spec;
    std::vector<SweepRow> rows;  ///< grid order, last axis fastest
};

/// Fraction of subradiant modes with at least half their intensity on
/// sites |j| <= (N-1)/4.
inline double skin_fraction(const Spectrum& sp) {
    int sub = 0, skin = 0;
    for (const auto& m : sp.modes) {
        if (!m.is_subradiant) continue;
        ++sub;
        const int n = static_cast<int>(m.intensity.size());
        if (1.0 - spectral::weight_outside(m.intensity, sp.j_min, (n - 1) / 4) >= 0.5) ++skin;
    }
    return sub > 0 ? static_cast<double>(skin) / sub : std::numeric_limits<double>::quiet_NaN();
}

inline ArraySpec array_for(const SweepPoint& p, const Scenario& base) {
    const double a = base.fiber.a;
    ArraySpec s = ArraySpec::from_extent(p.N, p.d_over_lambda * base.array.lambda0, p.y0_over_a * a,
                                         p.H_over_a * a, base.array.lambda0, base.array.orientation);
    s.allow_close_spacing = base.array.allow_close_spacing;
    return s;
}

inline void set_param(SweepPoint& p, SweepParam which, double v) {
    switch (which) {
    case SweepParam::Y0OverA: p.y0_over_a = v; break;
    case SweepParam::HOverA: p.H_over_a = v; break;
    case SweepParam::DOverLambda: p.d_over_lambda = v; break;
    case SweepParam::N:
        if (v != std::floor(v)) throw std::invalid_argument("sweep: N values must be integers");
        p.N = static_cast<int>(v);
        break;
    case SweepParam::Delta: p.delta = v; break;
    }
}

inline std::vector<SweepPoint> grid_points(const SweepSpec& spec) {
    std::vector<SweepPoint> pts;
    const auto& a0 = spec.axes[0];
    if (spec.axes.size() == 1) {
        for (double v : a0.values) {
            SweepPoint p = spec.base;
            set_param(p, a0.param, v);
            pts.push_back(p);
        }
    } else {
        for (double v0 : a0.values)
            for (double v1 : spec.axes[1].values) {
                SweepPoint p = spec.base;
                set_param(p, a0.param, v0);
                set_param(p, spec.axes[1].param, v1);
                pts.push_back(p);
            }
    }
    return pts;
}

/// Metrics for one point. Disorder samples share the clean array's gamma_bar.
inline SweepRow evaluate_point(const SweepPoint& p, const Scenario& base, const FiberMode& mode, int samples,
                               std::uint64_t seed) {
    SweepRow row;
    row.point = p;
    try {
        Scenario sc = base;
        sc.array = array_for(p, base);
        const AtomArray clean = build_array(sc.array);
        if (p.delta == 0.0) samples = 1;
        const double gref = build_system(sc, mode, clean).gamma_bar;

        std::vector<double> fmin, favg, tau, nsub, nsup, nexc, skin;
        for (int k = 0; k < samples; ++k) {
            AtomArray atoms = p.delta == 0.0 ? clean
                                             : apply_disorder(clean, DisorderSpec{p.delta, seed, samples},
                                                              static_cast<std::uint64_t>(k));
            const Spectrum sp = analyze(build_system(sc, mode, std::move(atoms), gref));
            fmin.push_back(sp.metrics.fwhm_min);
            favg.push_back(sp.metrics.fwhm_avg);
            tau.push_back(sp.metrics.tau_avg);
            nsub.push_back(sp.metrics.n_subradiant);
            nsup.push_back(sp.metrics.n_superradiant);
            nexc.push_back(sp.metrics.n_excluded);
            skin.push_back(skin_fraction(sp));
        }
        row.fwhm_min = stats::mean(fmin);
        row.fwhm_avg = stats::mean(favg);
        row.tau_avg = stats::mean(tau);
        row.n_subradiant = stats::mean(nsub);
        row.n_superradiant = stats::mean(nsup);
        row.n_excluded = stats::mean(nexc);
        row.skin_fraction = stats::mean(skin);
    } catch (const std::exception& e) {
        row.error = e.what();
    }
    return row;
}

inline SweepResult run_sweep(const SweepSpec& spec, const Scenario& base, const FiberMode& mode, int threads = 1) {
    spec.validate();
    SweepResult res;
    res.spec = spec;
    const auto pts = grid_points(spec);
    res.rows.resize(pts.size());
    parallel_for(pts.size(), threads,
                 [&](std::size_t i) { res.rows[i] = evaluate_point(pts[i], base, mode, spec.samples, spec.seed); });
    return res;
}

inline SweepResult run_sweep(const SweepSpec& spec, const Scenario& base, int threads = 1) {
    return run_sweep(spec, base, solve_propagation_constant(base.fiber), threads);
}

// ---------------------------------------------------------------------------

struct SampleStats {
    std::uint64_t sample_index = 0;
    SpectrumMetrics metrics;
    double max_subradiant_centroid = 0.0;  ///< max |centroid| over subradiant modes
};

struct EnsembleStats {
    DisorderSpec disorder;
    std::vector<SampleStats> samples;
    double fwhm_min_mean = 0.0, fwhm_min_std = 0.0;
    double fwhm_avg_mean = 0.0, fwhm_avg_std = 0.0;
    double tau_avg_mean = 0.0, tau_avg_std = 0.0;
    double n_subradiant_mean = 0.0, n_subradiant_std = 0.0;
};

/// Spectra of n_samples disordered copies of the scenario's array, all in
/// units of the clean array's gamma_bar.
inline EnsembleStats disorder_ensemble(const Scenario& base, const FiberMode& mode, const DisorderSpec& dis,
                                       int threads = 1) {
    if (dis.n_samples < 1) throw std::invalid_argument("disorder: n_samples must be >= 1");
    const AtomArray clean = build_array(base.array);
    const double gref = build_system(base, mode, clean).gamma_bar;

    EnsembleStats st;
    st.disorder = dis;
    st.samples.resize(dis.n_samples);
    parallel_for(static_cast<std::size_t>(dis.n_samples), threads, [&](std::size_t k) {
        const Spectrum sp = analyze(build_system(base, mode, apply_disorder(clean, dis, k), gref));
        SampleStats& s = st.samples[k];
        s.sample_index = k;
        s.metrics = sp.metrics;
        for (const auto& m : sp.modes)
            if (m.is_subradiant)
                s.max_subradiant_centroid =
                    std::max(s.max_subradiant_centroid, std::abs(spectral::centroid(m.intensity, sp.j_min)));
    });

    std::vector<double> fmin, favg, tau, nsub;
    for (const auto& s : st.samples) {
        fmin.push_back(s.metrics.fwhm_min);
        favg.push_back(s.metrics.fwhm_avg);
        tau.push_back(s.metrics.tau_avg);
        nsub.push_back(s.metrics.n_subradiant);
    }
    st.fwhm_min_mean = stats::mean(fmin);
    st.fwhm_min_std = stats::stddev(fmin);
    st.fwhm_avg_mean = stats::mean(favg);
    st.fwhm_avg_std = stats::stddev(favg);
    st.tau_avg_mean = stats::mean(tau);
    st.tau_avg_std = stats::stddev(tau);
    st.n_subradiant_mean = stats::mean(nsub);
    st.n_subradiant_std = stats::stddev(nsub);
    return st;
}

/// Period of a uniformly sampled series from the first autocorrelation peak
/// after the first zero crossing, refined by a parabola through the peak.
/// Returns NaN when the series has no such peak.
inline double dominant_period(std::span<const double> ys, double dx) {
    const std::size_t n = ys.size();
    if (n < 4) return std::numeric_limits<double>::quiet_NaN();
    const double m = stats::mean(ys);
    double var = 0.0;
    for (double y : ys) var += (y - m) * (y - m);
    var /= static_cast<double>(n);
    if (var == 0.0) return std::numeric_limits<double>::quiet_NaN();

    const std::size_t max_lag = (3 * n) / 4;
    std::vector<double> r(max_lag + 1);
    for (std::size_t k = 0; k <= max_lag; ++k) {
        double s = 0.0;
        for (std::size_t i = 0; i + k < n; ++i) s += (ys[i] - m) * (ys[i + k] - m);
        r[k] = s / static_cast<double>(n - k) / var;
    }
    std::size_t k = 1;
    while (k <= max_lag && r[k] > 0.0) ++k;
    for (; k + 1 <= max_lag; ++k) {
        if (r[k] >= r[k - 1] && r[k] > r[k + 1]) {
            const double den = r[k - 1] - 2.0 * r[k] + r[k + 1];
            const double shift = den != 0.0 ? 0.5 * (r[k - 1] - r[k + 1]) / den : 0.0;
            return (static_cast<double>(k) + shift) * dx;
        }
    }
    return std::numeric_limits<double>::quiet_NaN();
}

} // namespace chiralsim
