#pragma once

// Right-eigenpairs of the non-Hermitian array Hamiltonians, mode ranking by
// collective decay, Gaussian width fits and the subradiant summary metrics.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstring>
#include <limits>
#include <numbers>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "chiralsim/errors.hpp"
#include "chiralsim/model.hpp"

namespace chiralsim {

struct EigenMode {
    int m = 0;             ///< 1-based rank after sorting (0 before)
    cplx E;                ///< eigenvalue; gamma_bar units after sort_and_classify
    Eigen::VectorXcd psi;  ///< right eigenvector, sum |psi_j|^2 = 1
    std::vector<double> intensity;
    bool is_subradiant = false;
    int source_index = 0;  ///< position in the solver output

    double decay() const { return -E.imag(); }
};

namespace spectral {

inline std::uint64_t matrix_digest(const Eigen::MatrixXcd& H) {
    std::uint64_t h = 1469598103934665603ull;
    for (Eigen::Index c = 0; c < H.cols(); ++c)
        for (Eigen::Index r = 0; r < H.rows(); ++r) {
            const double parts[2] = {H(r, c).real(), H(r, c).imag()};
            unsigned char bytes[sizeof parts];
            std::memcpy(bytes, parts, sizeof parts);
            for (unsigned char b : bytes) h = (h ^ b) * 1099511628211ull;
        }
    return h;
}

/// Largest singular value, from the top eigenvalue of H^dagger H.
inline double spectral_norm(const Eigen::MatrixXcd& H) {
    if (H.size() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H.adjoint() * H, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(es.eigenvalues().maxCoeff(), 0.0));
}

inline double centroid(std::span<const double> intensity, int j_min) {
    double s = 0.0, w = 0.0;
    for (std::size_t i = 0; i < intensity.size(); ++i) {
        s += (j_min + static_cast<int>(i)) * intensity[i];
        w += intensity[i];
    }
    return s / w;
}

inline double rms_width(std::span<const double> intensity, int j_min) {
    const double c = centroid(intensity, j_min);
    double s = 0.0, w = 0.0;
    for (std::size_t i = 0; i < intensity.size(); ++i) {
        const double dj = j_min + static_cast<int>(i) - c;
        s += dj * dj * intensity[i];
        w += intensity[i];
    }
    return std::sqrt(s / w);
}

/// Fraction of the total intensity on sites with |j| > radius.
inline double weight_outside(std::span<const double> intensity, int j_min, int radius) {
    double out = 0.0, w = 0.0;
    for (std::size_t i = 0; i < intensity.size(); ++i) {
        if (std::abs(j_min + static_cast<int>(i)) > radius) out += intensity[i];
        w += intensity[i];
    }
    return out / w;
}

inline int argmax_site(std::span<const double> intensity, int j_min) {
    return j_min + static_cast<int>(std::max_element(intensity.begin(), intensity.end()) - intensity.begin());
}

} // namespace spectral

/// All right-eigenpairs, unsorted, eigenvalues in the units of H.
/// Every pair satisfies ||H psi - E psi|| <= 1e-8 ||H||_2.
inline std::vector<EigenMode> eigendecompose(const Eigen::MatrixXcd& H) {
    if (H.rows() != H.cols()) throw std::invalid_argument("eigendecompose: matrix is not square");
    if (H.rows() > 512) throw std::invalid_argument("eigendecompose: N > 512 is not supported");
    if (!H.allFinite()) throw std::invalid_argument("eigendecompose: matrix has non-finite entries");

    auto fail = [&](const std::string& why) {
        std::ostringstream os;
        os << "eigendecompose: " << why << " (matrix digest " << std::hex << spectral::matrix_digest(H) << ")";
        throw ConvergenceError(os.str());
    };

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(H, true);
    if (solver.info() != Eigen::Success) fail("QR iteration did not converge");

    const double norm = spectral::spectral_norm(H);
    const int n = static_cast<int>(H.rows());
    std::vector<EigenMode> modes(n);
    for (int k = 0; k < n; ++k) {
        EigenMode& mode = modes[k];
        mode.E = solver.eigenvalues()(k);
        mode.psi = solver.eigenvectors().col(k).normalized();
        mode.source_index = k;
        const double residual = (H * mode.psi - mode.E * mode.psi).norm();
        if (residual > 1e-8 * norm) fail("residual contract violated for pair " + std::to_string(k));
        mode.intensity.resize(n);
        for (int j = 0; j < n; ++j) mode.intensity[j] = std::norm(mode.psi(j));
    }
    return modes;
}

inline std::vector<EigenMode> eigendecompose(const HMatrix& H) { return eigendecompose(H.entries); }

/// Rescales eigenvalues to gamma_bar units, orders by collective decay -Im(E)
/// (ties: Re(E), then solver index) and flags -Im(E) < gamma_bar as subradiant.
inline std::vector<EigenMode> sort_and_classify(std::vector<EigenMode> modes, double gamma_bar) {
    if (!(gamma_bar > 0.0)) throw std::invalid_argument("sort_and_classify: gamma_bar must be > 0");
    for (auto& mode : modes) mode.E /= gamma_bar;
    std::sort(modes.begin(), modes.end(), [](const EigenMode& a, const EigenMode& b) {
        if (a.decay() != b.decay()) return a.decay() < b.decay();
        if (a.E.real() != b.E.real()) return a.E.real() < b.E.real();
        return a.source_index < b.source_index;
    });
    for (std::size_t k = 0; k < modes.size(); ++k) {
        modes[k].m = static_cast<int>(k) + 1;
        modes[k].is_subradiant = modes[k].decay() < 1.0;
    }
    return modes;
}

// ---------------------------------------------------------------------------
// Gaussian width fit

struct GaussianFit {
    double amplitude = 0.0;
    double center = 0.0;
    double sigma = 0.0;
    double fwhm = 0.0;               ///< sites
    double relative_residual = 0.0;  ///< ||fit - data|| / ||data||
    int iterations = 0;
    bool converged = false;
    bool clamped = false;   ///< sigma below 0.4 sites, fwhm set to the sampling floor
    bool poor_fit = false;  ///< not a single-peaked profile; excluded from averages
};

inline constexpr double kFwhmPerSigma = 2.3548200450309493;  // 2 sqrt(2 ln 2)
inline constexpr double kSigmaFloor = 0.4;
inline constexpr double kFwhmFloor = 0.94;

/// Damped least-squares (Levenberg-Marquardt) fit of A exp(-(j-j0)^2 / (2 sigma^2))
/// to a per-site distribution. Sites are j_min, j_min + 1, ...
inline GaussianFit fit_fwhm(std::span<const double> intensity, int j_min) {
    const int n = static_cast<int>(intensity.size());
    if (n == 0) throw std::invalid_argument("fit_fwhm: empty distribution");

    std::vector<double> js(n);
    for (int i = 0; i < n; ++i) js[i] = j_min + i;

    const double mu0 = spectral::centroid(intensity, j_min);
    const double sd0 = spectral::rms_width(intensity, j_min);
    Eigen::Vector3d p(*std::max_element(intensity.begin(), intensity.end()), mu0, std::max(sd0, 0.5));

    auto residuals = [&](const Eigen::Vector3d& q, Eigen::VectorXd& r) {
        r.resize(n);
        for (int i = 0; i < n; ++i) {
            const double t = (js[i] - q(1)) / q(2);
            r(i) = q(0) * std::exp(-0.5 * t * t) - intensity[i];
        }
        return r.squaredNorm();
    };

    double data_norm = 0.0;
    for (double v : intensity) data_norm += v * v;

    GaussianFit fit;
    Eigen::VectorXd r;
    double cost = residuals(p, r);
    double lambda = 1e-3;
    Eigen::MatrixXd Jm(n, 3);
    for (int it = 0; it < 500; ++it) {
        fit.iterations = it + 1;
        for (int i = 0; i < n; ++i) {
            const double dj = js[i] - p(1);
            const double e = std::exp(-0.5 * dj * dj / (p(2) * p(2)));
            Jm(i, 0) = e;
            Jm(i, 1) = p(0) * e * dj / (p(2) * p(2));
            Jm(i, 2) = p(0) * e * dj * dj / (p(2) * p(2) * p(2));
        }
        const Eigen::Matrix3d JtJ = Jm.transpose() * Jm;
        const Eigen::Vector3d g = Jm.transpose() * r;

        bool accepted = false;
        Eigen::Vector3d step = Eigen::Vector3d::Zero();
        for (int tries = 0; tries < 40 && !accepted; ++tries) {
            Eigen::Matrix3d A = JtJ;
            A.diagonal() += lambda * JtJ.diagonal().cwiseMax(1e-300);
            step = A.ldlt().solve(-g);
            Eigen::Vector3d trial = p + step;
            trial(2) = std::abs(trial(2));
            Eigen::VectorXd rt;
            const double ct = trial(2) > 0.0 ? residuals(trial, rt) : std::numeric_limits<double>::infinity();
            if (std::isfinite(ct) && ct <= cost) {
                p = trial;
                r = rt;
                const double prev = cost;
                cost = ct;
                lambda = std::max(lambda * 0.1, 1e-15);
                accepted = true;
                if (prev - ct <= 1e-15 * prev || step.norm() <= 1e-12 * p.norm() || ct <= 1e-28 * data_norm)
                    fit.converged = true;
            } else {
                lambda *= 10.0;
            }
        }
        if (!accepted) {
            // No descent direction left: at a (numerical) minimum.
            fit.converged = true;
        }
        if (p(2) > 10.0 * n || std::abs(p(1) - mu0) > 10.0 * n) break;  // flattening out: no peak to fit
        if (fit.converged || p(2) < 0.05) {
            fit.converged = true;
            break;
        }
    }

    fit.amplitude = p(0);
    fit.center = p(1);
    fit.sigma = std::abs(p(2));
    fit.relative_residual = std::sqrt(cost / data_norm);
    if (fit.sigma < kSigmaFloor) {
        fit.clamped = true;
        fit.fwhm = kFwhmFloor;
    } else {
        fit.fwhm = kFwhmPerSigma * fit.sigma;
    }
    fit.poor_fit = !fit.converged || fit.relative_residual > 0.3 || fit.sigma > n || fit.amplitude <= 0.0 ||
                   fit.center < j_min - 0.5 || fit.center > j_min + n - 0.5;
    return fit;
}

// ---------------------------------------------------------------------------

struct SpectrumMetrics {
    std::vector<GaussianFit> fits;  ///< per mode, in rank order
    double fwhm_min = std::numeric_limits<double>::quiet_NaN();
    double fwhm_avg = std::numeric_limits<double>::quiet_NaN();
    double tau_avg = std::numeric_limits<double>::quiet_NaN();  ///< gamma_bar^-1
    int n_subradiant = 0;
    int n_superradiant = 0;
    int n_excluded = 0;  ///< subradiant modes with a poor Gaussian fit
};

/// Intensity lifetime of a mode, 1 / (2 (-Im E)).
inline double lifetime(const EigenMode& mode) { return 1.0 / (2.0 * mode.decay()); }

/// Metrics over sorted, classified modes. Widths average only subradiant
/// modes with a good fit; lifetimes average all subradiant modes.
inline SpectrumMetrics summary_metrics(const std::vector<EigenMode>& modes, int j_min) {
    SpectrumMetrics s;
    double fw_sum = 0.0, tau_sum = 0.0;
    int fw_count = 0;
    for (const auto& mode : modes) {
        s.fits.push_back(fit_fwhm(mode.intensity, j_min));
        const GaussianFit& f = s.fits.back();
        if (!mode.is_subradiant) {
            ++s.n_superradiant;
            continue;
        }
        ++s.n_subradiant;
        tau_sum += lifetime(mode);
        if (f.poor_fit) {
            ++s.n_excluded;
            continue;
        }
        fw_sum += f.fwhm;
        ++fw_count;
        if (!(f.fwhm >= s.fwhm_min)) s.fwhm_min = f.fwhm;
    }
    if (s.n_subradiant > 0) s.tau_avg = tau_sum / s.n_subradiant;
    if (fw_count > 0) s.fwhm_avg = fw_sum / fw_count;
    return s;
}

} // namespace chiralsim
