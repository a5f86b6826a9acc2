#pragma once

// Driven single-excitation dynamics dv/dt = -i H v + s(t) e_{j_s} with a
// Gaussian source s(t) = A exp(-(t - t_s)^2 / (2 tau^2)) exp(-i omega_s t).
// Time is measured in the inverse units of H (gamma_bar^-1 when H is scaled
// by gamma_bar).

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "chiralsim/errors.hpp"
#include "chiralsim/model.hpp"
#include "chiralsim/spectral.hpp"
#include "chiralsim/stats.hpp"

namespace chiralsim {

struct SourceSpec {
    int j_s = 0;
    double t_s = 1.0;
    double tau_w = 2.0;
    double omega_s = -0.0032;
    double amplitude = 1.0;

    cplx operator()(double t) const {
        const double u = (t - t_s) / tau_w;
        return amplitude * std::exp(-0.5 * u * u) * std::polar(1.0, -omega_s * t);
    }

    /// Time after which the drive is treated as switched off.
    double off_time() const { return t_s + 5.0 * tau_w; }

    void validate(int j_min, int n) const {
        if (!(tau_w > 0.0)) throw std::invalid_argument("source: tau_w must be > 0");
        if (j_s < j_min || j_s >= j_min + n)
            throw std::invalid_argument("source: j_s=" + std::to_string(j_s) + " is outside the array");
    }

    bool operator==(const SourceSpec&) const = default;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<Eigen::VectorXcd> v;
    int j_min = 0;

    std::size_t frames() const { return times.size(); }

    std::vector<double> intensity(std::size_t k) const {
        std::vector<double> I(v[k].size());
        for (Eigen::Index j = 0; j < v[k].size(); ++j) I[j] = std::norm(v[k](j));
        return I;
    }
    double power(std::size_t k) const { return v[k].squaredNorm(); }
    double centroid(std::size_t k) const {
        const auto I = intensity(k);
        return spectral::centroid(I, j_min);
    }
};

struct EvolveOptions {
    int stride = 1;                             ///< store every stride-th step
    std::optional<Eigen::VectorXcd> initial;    ///< v(0); zero when absent
    bool detect_instability = true;
    bool use_source = true;
};

/// Largest step allowed by the accuracy guard 0.01 / max_j(gamma_Lj + gamma_Rj),
/// the single-atom total rate read off the diagonal. Matrices without diagonal
/// loss fall back to the row-sum norm.
inline double max_stable_dt(const Eigen::MatrixXcd& H) {
    double rate = 0.0;
    for (Eigen::Index j = 0; j < H.rows(); ++j) rate = std::max(rate, -2.0 * H(j, j).imag());
    if (!(rate > 0.0)) rate = H.cwiseAbs().rowwise().sum().maxCoeff();
    return rate > 0.0 ? 0.01 / rate : 1e-2;
}

/// Fixed-step classical RK4. `dt` is reduced so that t_end is an integer number
/// of steps; it must not exceed max_stable_dt(H).
inline Trajectory evolve(const Eigen::MatrixXcd& H, int j_min, const SourceSpec& src, double t_end, double dt,
                         const EvolveOptions& opt = {}) {
    const int n = static_cast<int>(H.rows());
    if (opt.use_source) src.validate(j_min, n);
    if (!(t_end > 0.0)) throw std::invalid_argument("evolve: t_end must be > 0");
    if (!(dt > 0.0)) throw std::invalid_argument("evolve: dt must be > 0");
    const double guard = max_stable_dt(H);
    if (dt > guard * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "evolve: dt=" << dt << " exceeds the stability guard " << guard;
        throw std::invalid_argument(os.str());
    }
    if (opt.stride < 1) throw std::invalid_argument("evolve: stride must be >= 1");

    const long steps = static_cast<long>(std::ceil(t_end / dt - 1e-9));
    const double h = t_end / static_cast<double>(steps);
    const int is = src.j_s - j_min;

    Eigen::VectorXcd v = opt.initial ? *opt.initial : Eigen::VectorXcd::Zero(n);
    if (v.size() != n) throw std::invalid_argument("evolve: initial state has the wrong length");

    const Eigen::MatrixXcd A = -I_unit * H;
    auto rhs = [&](double t, const Eigen::VectorXcd& x) {
        Eigen::VectorXcd r = A * x;
        if (opt.use_source) r(is) += src(t);
        return r;
    };

    Trajectory tr;
    tr.j_min = j_min;
    tr.times.push_back(0.0);
    tr.v.push_back(v);

    double p_prev = v.squaredNorm();
    for (long k = 0; k < steps; ++k) {
        const double t = k * h;
        const Eigen::VectorXcd k1 = rhs(t, v);
        const Eigen::VectorXcd k2 = rhs(t + 0.5 * h, v + 0.5 * h * k1);
        const Eigen::VectorXcd k3 = rhs(t + 0.5 * h, v + 0.5 * h * k2);
        const Eigen::VectorXcd k4 = rhs(t + h, v + h * k3);
        v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        const double t_next = (k + 1) * h;
        const double p = v.squaredNorm();
        if (!std::isfinite(p)) throw InstabilityError("evolve: state became non-finite at t=" + std::to_string(t_next));
        const bool source_off = !opt.use_source || t > src.off_time();
        if (opt.detect_instability && source_off && p > p_prev * (1.0 + 1e-8) && p > 1e-300) {
            std::ostringstream os;
            os << "evolve: norm grew after the source switched off (t=" << t_next << ", P " << p_prev << " -> " << p
               << "); H is not passive or dt is too large";
            throw InstabilityError(os.str());
        }
        p_prev = p;
        if ((k + 1) % opt.stride == 0 || k + 1 == steps) {
            tr.times.push_back(t_next);
            tr.v.push_back(v);
        }
    }
    return tr;
}

inline Trajectory evolve(const HMatrix& H, const SourceSpec& src, double t_end, double dt, int j_min,
                         const EvolveOptions& opt = {}) {
    return evolve(H.entries, j_min, src, t_end, dt, opt);
}

struct FunnelingMetrics {
    std::vector<double> times;
    std::vector<double> power;
    std::vector<double> centroid;
    std::vector<double> rms_width;
    double decay_rate = std::nan("");  ///< -d ln P / dt over the fit window
    double fit_r_squared = std::nan("");
};

/// Per-frame centroid, RMS width and total power, plus an exponential fit of
/// P(t) over frames with t >= fit_from.
inline FunnelingMetrics funneling_metrics(const Trajectory& tr, double fit_from) {
    FunnelingMetrics m;
    std::vector<double> xs, ys;
    for (std::size_t k = 0; k < tr.frames(); ++k) {
        const double p = tr.power(k);
        m.times.push_back(tr.times[k]);
        m.power.push_back(p);
        if (p > 0.0) {
            const auto I = tr.intensity(k);
            m.centroid.push_back(spectral::centroid(I, tr.j_min));
            m.rms_width.push_back(spectral::rms_width(I, tr.j_min));
        } else {
            m.centroid.push_back(std::nan(""));
            m.rms_width.push_back(std::nan(""));
        }
        if (tr.times[k] >= fit_from && p > 0.0) {
            xs.push_back(tr.times[k]);
            ys.push_back(std::log(p));
        }
    }
    if (xs.size() >= 2) {
        const auto f = stats::linear_fit(xs, ys);
        m.decay_rate = -f.slope;
        m.fit_r_squared = f.r_squared;
    }
    return m;
}

} // namespace chiralsim
