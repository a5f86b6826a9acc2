#pragma once

// Tilted atomic array between a right-propagating (top) and a left-propagating
// (bottom) waveguide. Sites are labelled j = -(N-1)/2 .. (N-1)/2 and stored at
// index i = j + (N-1)/2. y is the vertical offset from the gap center, positive
// towards the top guide.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "chiralsim/errors.hpp"
#include "chiralsim/fiber_mode.hpp"
#include "chiralsim/rng.hpp"

namespace chiralsim {

/// Which end of the array sits closest to the top (right-propagating) guide.
enum class Orientation { PositiveTowardTop, NegativeTowardTop };

inline double orientation_sign(Orientation o) { return o == Orientation::PositiveTowardTop ? 1.0 : -1.0; }

/// Below this surface distance the radiation-mode rate is no longer flat.
inline constexpr double kRadiationSaturationDistance = 125.0;

struct ArraySpec {
    int N = 41;
    double d = 9073.8;       ///< horizontal spacing (nm)
    double D = 1000.0;       ///< surface-to-surface gap (nm)
    double theta = 0.002;    ///< tilt angle (rad)
    double lambda0 = 852.0;  ///< photon wavelength (nm)
    Orientation orientation = Orientation::PositiveTowardTop;
    bool allow_close_spacing = false;  ///< permit d < 10 lambda0 (with a warning)

    /// Geometry fixed by the nearest surface distance y0 and the vertical
    /// extent H of the array, so that D = H + 2 y0 and (N-1) theta d = H.
    static ArraySpec from_extent(int N, double d, double y0, double H, double lambda0 = 852.0,
                                 Orientation o = Orientation::PositiveTowardTop) {
        ArraySpec s;
        s.N = N;
        s.d = d;
        s.D = H + 2.0 * y0;
        s.theta = N > 1 ? H / ((N - 1) * d) : 0.0;
        s.lambda0 = lambda0;
        s.orientation = o;
        return s;
    }

    int half() const { return (N - 1) / 2; }
    double extent() const { return (N - 1) * theta * d; }
    double nearest_distance() const { return 0.5 * (D - extent()); }

    void validate() const {
        if (N < 1 || N % 2 == 0) throw GeometryError("array: N must be odd and >= 1");
        if (!(d > 0.0)) throw GeometryError("array: spacing d must be > 0");
        if (!(D > 0.0)) throw GeometryError("array: gap D must be > 0");
        if (!(lambda0 > 0.0)) throw GeometryError("array: lambda0 must be > 0");
        if (!(std::abs(extent()) < D)) throw GeometryError("array: tilted array does not fit between the surfaces");
        if (d < 10.0 * lambda0 && !allow_close_spacing)
            throw GeometryError("array: d < 10 lambda0 (set allow_close_spacing to override)");
    }

    bool operator==(const ArraySpec&) const = default;
};

struct AtomArray {
    std::vector<int> j;
    std::vector<double> x, y, dist_top, dist_bottom;
    double D = 0.0;
    std::vector<std::string> warnings;

    int size() const { return static_cast<int>(j.size()); }
    int j_min() const { return j.empty() ? 0 : j.front(); }
    int index_of(int site) const { return site - j_min(); }
};

struct DecayProfile {
    std::vector<double> gammaR, gammaL;
    double gamma_bar = 0.0;

    int size() const { return static_cast<int>(gammaR.size()); }
};

struct DisorderSpec {
    double delta = 0.0;  ///< amplitude (nm); offsets are delta * R, R in (-0.5, 0.5)
    std::uint64_t seed = 0;
    int n_samples = 1;

    bool operator==(const DisorderSpec&) const = default;
};

namespace detail {

inline void finish_distances(AtomArray& a) {
    const int n = a.size();
    a.dist_top.resize(n);
    a.dist_bottom.resize(n);
    a.warnings.clear();
    bool close = false;
    for (int i = 0; i < n; ++i) {
        a.dist_top[i] = 0.5 * a.D - a.y[i];
        a.dist_bottom[i] = 0.5 * a.D + a.y[i];
        if (!(a.dist_top[i] > 0.0) || !(a.dist_bottom[i] > 0.0))
            throw GeometryError("array: atom j=" + std::to_string(a.j[i]) + " lies outside the waveguide gap");
        close = close || a.dist_top[i] < kRadiationSaturationDistance ||
                a.dist_bottom[i] < kRadiationSaturationDistance;
    }
    if (close)
        a.warnings.push_back("an atom is closer than 125 nm to a waveguide surface; radiation-mode rate is not flat there");
}

} // namespace detail

inline AtomArray build_array(const ArraySpec& spec) {
    spec.validate();
    AtomArray a;
    a.D = spec.D;
    const int half = spec.half();
    const double sgn = orientation_sign(spec.orientation);
    for (int site = -half; site <= half; ++site) {
        a.j.push_back(site);
        a.x.push_back(site * spec.d);
        a.y.push_back(sgn * site * spec.theta * spec.d);
    }
    detail::finish_distances(a);
    if (spec.d < 10.0 * spec.lambda0)
        a.warnings.push_back("d < 10 lambda0: environment-mediated couplings are not negligible");
    return a;
}

/// Vertical displacement y_j -> y_j + delta R_j for disorder sample `sample_index`.
inline AtomArray apply_disorder(const AtomArray& array, const DisorderSpec& dis, std::uint64_t sample_index) {
    if (!(dis.delta >= 0.0)) throw GeometryError("disorder: delta must be >= 0");
    AtomArray out = array;
    for (int i = 0; i < out.size(); ++i)
        out.y[i] += dis.delta * rng::centered_uniform(dis.seed, sample_index, static_cast<std::uint64_t>(i));
    detail::finish_distances(out);
    return out;
}

inline double mean_decay(const std::vector<double>& gR, const std::vector<double>& gL) {
    const double sum = std::accumulate(gR.begin(), gR.end(), 0.0) + std::accumulate(gL.begin(), gL.end(), 0.0);
    return sum / (2.0 * static_cast<double>(gR.size()));
}

inline DecayProfile decay_profile(const AtomArray& array, const FiberMode& mode, const FiberGeometry& geom,
                                  const Dipole& dipole = {}) {
    DecayProfile p;
    const int n = array.size();
    p.gammaR.resize(n);
    p.gammaL.resize(n);
    for (int i = 0; i < n; ++i) {
        p.gammaR[i] = decay_rate(mode, geom, geom.a + array.dist_top[i], dipole);
        p.gammaL[i] = decay_rate(mode, geom, geom.a + array.dist_bottom[i], dipole);
    }
    p.gamma_bar = mean_decay(p.gammaR, p.gammaL);
    return p;
}

} // namespace chiralsim
