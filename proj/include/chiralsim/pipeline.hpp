#pragma once

// Glue from a scenario description to a scaled Hamiltonian and its spectrum.

#include <optional>
#include <string>
#include <string_view>

#include "chiralsim/dynamics.hpp"
#include "chiralsim/fiber_mode.hpp"
#include "chiralsim/geometry.hpp"
#include "chiralsim/model.hpp"
#include "chiralsim/spectral.hpp"

namespace chiralsim {

/// Wavenumber used in the hopping phases e^{ik(x_j - x_l)}.
enum class PhaseReference { FreeSpace, Guided };

inline std::string_view to_string(PhaseReference p) { return p == PhaseReference::Guided ? "guided" : "free_space"; }

inline PhaseReference phase_reference_from_string(std::string_view s) {
    if (s == "free_space") return PhaseReference::FreeSpace;
    if (s == "guided") return PhaseReference::Guided;
    throw std::invalid_argument("unknown phase reference '" + std::string(s) + "'");
}

struct Scenario {
    FiberGeometry fiber;
    Dipole dipole;
    ArraySpec array;
    ModelSpec model;
    PhaseReference phase = PhaseReference::FreeSpace;

    bool operator==(const Scenario&) const = default;
};

struct System {
    FiberMode mode;
    AtomArray atoms;
    DecayProfile profile;
    HMatrix H;                 ///< gamma0 units
    double gamma_bar = 0.0;    ///< normalizer (gamma0 units)
    Eigen::MatrixXcd H_scaled; ///< H / gamma_bar

    int j_min() const { return atoms.j_min(); }
};

/// Builds the Hamiltonian for `atoms` (or the clean array of the scenario).
/// `gamma_ref` overrides the normalizer; by default the system's own gamma_bar,
/// plus gamma0 for the chiral_env variant (total single-atom rate).
inline System build_system(const Scenario& sc, const FiberMode& mode, std::optional<AtomArray> atoms = std::nullopt,
                           std::optional<double> gamma_ref = std::nullopt) {
    System s;
    s.mode = mode;
    s.atoms = atoms ? std::move(*atoms) : build_array(sc.array);
    s.profile = decay_profile(s.atoms, mode, sc.fiber, sc.dipole);
    ModelSpec spec = sc.model;
    spec.k = sc.phase == PhaseReference::Guided ? mode.beta : 2.0 * std::numbers::pi / sc.array.lambda0;
    s.H = build_model(s.profile, s.atoms, spec);
    const double own = s.profile.gamma_bar + (spec.variant == Variant::ChiralEnv ? spec.gamma0 : 0.0);
    s.gamma_bar = gamma_ref ? *gamma_ref : own;
    s.H_scaled = s.H.entries / s.gamma_bar;
    return s;
}

inline System build_system(const Scenario& sc) { return build_system(sc, solve_propagation_constant(sc.fiber)); }

struct Spectrum {
    std::vector<EigenMode> modes;  ///< sorted, eigenvalues in gamma_bar units
    SpectrumMetrics metrics;
    int j_min = 0;
};

inline Spectrum analyze(const System& s) {
    Spectrum sp;
    sp.j_min = s.j_min();
    sp.modes = sort_and_classify(eigendecompose(s.H.entries), s.gamma_bar);
    sp.metrics = summary_metrics(sp.modes, sp.j_min);
    return sp;
}

} // namespace chiralsim
