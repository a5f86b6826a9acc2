#pragma once

// Dense single-excitation Hamiltonians (gamma0 units) for the chiral
// two-waveguide array and the comparison models.
//
// Index convention for the chiral variants, sites l < j:
//   H[l][j] = -i sqrt(gL_l gL_j) e^{ik(x_j - x_l)}   (left-moving photons, j -> l)
//   H[j][l] = -i sqrt(gR_l gR_j) e^{ik(x_j - x_l)}   (right-moving photons, l -> j)

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "chiralsim/errors.hpp"
#include "chiralsim/geometry.hpp"

namespace chiralsim {

using cplx = std::complex<double>;
inline constexpr cplx I_unit{0.0, 1.0};

enum class Variant { Chiral, ChiralEnv, ToyNN, ToyNNLoss, Reciprocal };

inline std::string_view to_string(Variant v) {
    switch (v) {
    case Variant::Chiral: return "chiral";
    case Variant::ChiralEnv: return "chiral_env";
    case Variant::ToyNN: return "toy_nn";
    case Variant::ToyNNLoss: return "toy_nn_loss";
    case Variant::Reciprocal: return "reciprocal";
    }
    return "?";
}

inline Variant variant_from_string(std::string_view s) {
    for (Variant v : {Variant::Chiral, Variant::ChiralEnv, Variant::ToyNN, Variant::ToyNNLoss, Variant::Reciprocal})
        if (to_string(v) == s) return v;
    throw std::invalid_argument("unknown model variant '" + std::string(s) + "'");
}

struct ModelSpec {
    Variant variant = Variant::Chiral;
    double k = 2.0 * std::numbers::pi / 852.0;  ///< phase wavenumber (1/nm)
    std::vector<double> detuning;                ///< on-site Delta_j (gamma0 units); empty = all zero
    double gamma0 = 1.0;                         ///< free-space rate added by chiral_env

    void validate() const {
        if (!(k > 0.0)) throw std::invalid_argument("model: k must be > 0");
        if (!(gamma0 >= 0.0)) throw std::invalid_argument("model: gamma0 must be >= 0");
    }

    bool operator==(const ModelSpec&) const = default;
};

struct HMatrix {
    Eigen::MatrixXcd entries;
    ModelSpec spec;
    DecayProfile profile;

    int size() const { return static_cast<int>(entries.rows()); }
    /// Mean guided decay of the profile the matrix was built from.
    double gamma_bar() const { return profile.gamma_bar; }
};

namespace detail {

inline void check_sizes(const DecayProfile& p, const AtomArray& a, const ModelSpec& spec) {
    if (p.size() != a.size() || static_cast<int>(p.gammaL.size()) != a.size())
        throw std::invalid_argument("model: decay profile and atom array sizes differ");
    if (!spec.detuning.empty() && static_cast<int>(spec.detuning.size()) != a.size())
        throw std::invalid_argument("model: detuning list length differs from atom count");
}

inline double detuning_at(const ModelSpec& spec, int i) { return spec.detuning.empty() ? 0.0 : spec.detuning[i]; }

inline Eigen::MatrixXcd chiral_entries(const DecayProfile& p, const AtomArray& a, const ModelSpec& spec,
                                       double extra_loss) {
    const int n = a.size();
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(n, n);
    for (int j = 0; j < n; ++j) {
        H(j, j) = detuning_at(spec, j) - 0.5 * I_unit * (p.gammaL[j] + p.gammaR[j] + extra_loss);
        for (int l = 0; l < j; ++l) {
            const cplx phase = std::polar(1.0, spec.k * (a.x[j] - a.x[l]));
            H(l, j) = -I_unit * std::sqrt(p.gammaL[l] * p.gammaL[j]) * phase;
            H(j, l) = -I_unit * std::sqrt(p.gammaR[l] * p.gammaR[j]) * phase;
        }
    }
    return H;
}

} // namespace detail

inline HMatrix build_chiral(const DecayProfile& p, const AtomArray& a, const ModelSpec& spec) {
    spec.validate();
    detail::check_sizes(p, a, spec);
    return {detail::chiral_entries(p, a, spec, 0.0), spec, p};
}

/// Guided couplings off the diagonal; the diagonal uses the total rates
/// gamma_{L/R}^(g) + gamma0 for both channels, i.e. an extra -i gamma0 per atom.
inline HMatrix build_chiral_env(const DecayProfile& p, const AtomArray& a, const ModelSpec& spec) {
    spec.validate();
    detail::check_sizes(p, a, spec);
    return {detail::chiral_entries(p, a, spec, 2.0 * spec.gamma0), spec, p};
}

/// Nearest-neighbour toy: zero diagonal, real couplings
/// H[j][j+1] = sqrt(gL_j gL_{j+1}), H[j+1][j] = sqrt(gR_j gR_{j+1}).
inline HMatrix build_toy_nn(const DecayProfile& p) {
    const int n = p.size();
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(n, n);
    for (int j = 0; j + 1 < n; ++j) {
        H(j, j + 1) = std::sqrt(p.gammaL[j] * p.gammaL[j + 1]);
        H(j + 1, j) = std::sqrt(p.gammaR[j] * p.gammaR[j + 1]);
    }
    ModelSpec spec;
    spec.variant = Variant::ToyNN;
    return {H, spec, p};
}

inline HMatrix build_toy_nn_loss(const DecayProfile& p) {
    HMatrix h = build_toy_nn(p);
    for (int j = 0; j < p.size(); ++j) h.entries(j, j) = -0.5 * I_unit * (p.gammaL[j] + p.gammaR[j]);
    h.spec.variant = Variant::ToyNNLoss;
    return h;
}

/// Reciprocal comparison model with the same local losses:
/// H[l][j] = -i t_jl e^{ik|x_j - x_l|}, t_jl = (sqrt(gL_l gL_j) + sqrt(gR_l gR_j)) / 2.
inline HMatrix build_reciprocal(const DecayProfile& p, const AtomArray& a, const ModelSpec& spec) {
    spec.validate();
    detail::check_sizes(p, a, spec);
    const int n = a.size();
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(n, n);
    for (int j = 0; j < n; ++j) {
        H(j, j) = detail::detuning_at(spec, j) - 0.5 * I_unit * (p.gammaL[j] + p.gammaR[j]);
        for (int l = 0; l < j; ++l) {
            const double t = 0.5 * (std::sqrt(p.gammaL[l] * p.gammaL[j]) + std::sqrt(p.gammaR[l] * p.gammaR[j]));
            const cplx v = -I_unit * t * std::polar(1.0, spec.k * std::abs(a.x[j] - a.x[l]));
            H(l, j) = v;
            H(j, l) = v;
        }
    }
    return {H, spec, p};
}

inline HMatrix build_model(const DecayProfile& p, const AtomArray& a, const ModelSpec& spec) {
    switch (spec.variant) {
    case Variant::Chiral: return build_chiral(p, a, spec);
    case Variant::ChiralEnv: return build_chiral_env(p, a, spec);
    case Variant::ToyNN: {
        detail::check_sizes(p, a, spec);
        HMatrix h = build_toy_nn(p);
        h.spec = spec;
        return h;
    }
    case Variant::ToyNNLoss: {
        detail::check_sizes(p, a, spec);
        HMatrix h = build_toy_nn_loss(p);
        h.spec = spec;
        return h;
    }
    case Variant::Reciprocal: return build_reciprocal(p, a, spec);
    }
    throw std::invalid_argument("model: unhandled variant");
}

/// Decay matrix Gamma = i (H - H^dagger); positive semidefinite for passive models.
inline Eigen::MatrixXcd decay_matrix(const Eigen::MatrixXcd& H) { return I_unit * (H - H.adjoint()); }

} // namespace chiralsim
