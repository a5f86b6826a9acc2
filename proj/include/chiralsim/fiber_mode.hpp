#pragma once

// Fundamental (HE11) guided mode of a step-index cylindrical waveguide and the
// distance-dependent spontaneous emission rate of an atom outside it.
//
// Lengths are in nm, wavenumbers in 1/nm. Decay rates are returned in units of
// the free-space rate gamma0.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string>

#include "chiralsim/bessel.hpp"
#include "chiralsim/errors.hpp"
#include "chiralsim/quadrature.hpp"

namespace chiralsim {

struct FiberGeometry {
    double a = 250.0;        ///< waveguide radius (nm)
    double n1 = 1.4525;      ///< core index (fused silica at 852 nm)
    double n2 = 1.0;         ///< cladding index (vacuum)
    double lambda0 = 852.0;  ///< free-space wavelength (nm)

    double k0() const { return 2.0 * std::numbers::pi / lambda0; }

    void validate() const {
        if (!(a > 0.0)) throw DomainError("fiber: radius a must be > 0");
        if (!(n2 >= 1.0)) throw DomainError("fiber: n2 must be >= 1");
        if (!(n1 > n2)) throw DomainError("fiber: n1 must exceed n2");
        if (!(lambda0 > 0.0)) throw DomainError("fiber: lambda0 must be > 0");
    }

    bool operator==(const FiberGeometry&) const = default;
};

struct FiberMode {
    double beta = 0.0;     ///< propagation constant (1/nm)
    double q = 0.0;        ///< sqrt(beta^2 - n2^2 k0^2)
    double h = 0.0;        ///< sqrt(n1^2 k0^2 - beta^2)
    double s_param = 0.0;  ///< polarization parameter s
    double C = 0.0;        ///< field normalization constant (1/nm)
};

struct ModeFieldSample {
    std::complex<double> e_r, e_phi, e_z;
    double r = 0.0;

    double intensity() const { return std::norm(e_r) + std::norm(e_phi) + std::norm(e_z); }
};

/// Orientation of the atomic dipole used when projecting the mode field.
/// Without a direction the full intensity |e|^2 is used (orientation-averaged
/// coupling up to a constant). `rate_scale` multiplies the rate prefactor.
struct Dipole {
    std::optional<std::array<double, 3>> direction;  ///< unit vector in (r, phi, z)
    double rate_scale = 1.0;

    bool operator==(const Dipole&) const = default;
};

namespace fiber {

struct EigenEquationTerms {
    double lhs = 0.0;
    double rhs = 0.0;

    double residual() const { return lhs - rhs; }
    double relative_residual() const { return std::abs(lhs - rhs) / (std::abs(lhs) + std::abs(rhs)); }
};

/// Both sides of the HE11 eigenvalue equation at trial propagation constant beta.
inline EigenEquationTerms eigen_equation(const FiberGeometry& g, double beta) {
    const double k0 = g.k0();
    const double n1s = g.n1 * g.n1, n2s = g.n2 * g.n2;
    const double q = std::sqrt(beta * beta - n2s * k0 * k0);
    const double h = std::sqrt(n1s * k0 * k0 - beta * beta);
    const double ha = h * g.a, qa = q * g.a;

    const double kterm = bessel::K1_prime(qa) / (qa * bessel::K(1, qa));
    const double inv = 1.0 / (qa * qa) + 1.0 / (ha * ha);
    const double split = (n1s - n2s) / (2.0 * n1s) * kterm;

    EigenEquationTerms t;
    t.lhs = bessel::J(0, ha) / (ha * bessel::J(1, ha));
    t.rhs = -(n1s + n2s) / (2.0 * n1s) * kterm + 1.0 / (ha * ha) -
            std::sqrt(split * split + beta * beta / (n1s * k0 * k0) * inv * inv);
    return t;
}

inline double s_parameter(const FiberGeometry& g, double q, double h) {
    const double ha = h * g.a, qa = q * g.a;
    const double num = 1.0 / (ha * ha) + 1.0 / (qa * qa);
    const double den = bessel::J1_prime(ha) / (ha * bessel::J(1, ha)) +
                       bessel::K1_prime(qa) / (qa * bessel::K(1, qa));
    return num / den;
}

/// Unnormalized squared field components (C = 1) at radius r.
inline std::array<double, 3> field_shape(const FiberMode& m, double r) {
    const double x = m.q * r;
    const double k0v = bessel::K(0, x), k1v = bessel::K(1, x), k2v = bessel::K(2, x);
    const double er = (1.0 - m.s_param) * k0v + (1.0 + m.s_param) * k2v;
    const double ep = (1.0 - m.s_param) * k0v - (1.0 + m.s_param) * k2v;
    const double ez = 2.0 * m.q / m.beta * k1v;
    return {er, ep, ez};
}

inline double normalization_constant(const FiberGeometry& g, const FiberMode& m) {
    auto integrand = [&](double r) {
        const auto f = field_shape(m, r);
        return (f[0] * f[0] + f[1] * f[1] + f[2] * f[2]) * r;
    };
    const auto res = quad::integrate(integrand, g.a, g.a + 40.0 / m.q, 1e-10);
    return 1.0 / std::sqrt(2.0 * std::numbers::pi * g.n2 * g.n2 * res.value);
}

inline FiberMode complete_mode(const FiberGeometry& g, double beta) {
    const double k0 = g.k0();
    FiberMode m;
    m.beta = beta;
    m.q = std::sqrt(beta * beta - g.n2 * g.n2 * k0 * k0);
    m.h = std::sqrt(g.n1 * g.n1 * k0 * k0 - beta * beta);
    m.s_param = s_parameter(g, m.q, m.h);
    m.C = normalization_constant(g, m);
    return m;
}

} // namespace fiber

/// Fundamental guided root of the eigenvalue equation: the first sign change
/// met when scanning up from n2 k0, refined by bisection.
inline FiberMode solve_propagation_constant(const FiberGeometry& g, int scan_points = 10000) {
    g.validate();
    const double k0 = g.k0();
    const double eps = 1e-6 * k0;
    const double lo = g.n2 * k0 + eps, hi = g.n1 * k0 - eps;

    auto f = [&](double b) { return fiber::eigen_equation(g, b).residual(); };

    double b_prev = lo, f_prev = f(lo);
    for (int i = 1; i < scan_points; ++i) {
        const double b = lo + (hi - lo) * i / (scan_points - 1);
        const double fb = f(b);
        if (std::isfinite(f_prev) && std::isfinite(fb) && std::signbit(f_prev) != std::signbit(fb)) {
            double a0 = b_prev, a1 = b, f0 = f_prev;
            for (int it = 0; it < 200 && (a1 - a0) > 1e-13 * a1; ++it) {
                const double mid = 0.5 * (a0 + a1);
                const double fm = f(mid);
                if (std::signbit(fm) == std::signbit(f0)) {
                    a0 = mid;
                    f0 = fm;
                } else {
                    a1 = mid;
                }
            }
            const double root = std::abs(f(a0)) < std::abs(f(a1)) ? a0 : a1;
            // A pole of J0/J1 also flips sign; only accept true roots.
            if (fiber::eigen_equation(g, root).relative_residual() < 1e-10) return fiber::complete_mode(g, root);
        }
        b_prev = b;
        f_prev = fb;
    }
    throw NoRootError("fiber: no guided HE11 root in (n2 k0, n1 k0) for a=" + std::to_string(g.a) +
                      " nm, lambda0=" + std::to_string(g.lambda0) + " nm");
}

inline ModeFieldSample mode_profile(const FiberMode& m, const FiberGeometry& g, double r) {
    if (!(r > g.a)) throw DomainError("mode_profile: r must exceed the fiber radius");
    const auto f = fiber::field_shape(m, r);
    return {std::complex<double>(0.0, m.C * f[0]), std::complex<double>(-m.C * f[1], 0.0),
            std::complex<double>(m.C * f[2], 0.0), r};
}

/// Prefactor turning |d.e|^2 (1/nm^2) into gamma/gamma0: 3 lambda0^2 / (8 pi).
inline double rate_prefactor(const FiberGeometry& g) { return 3.0 * g.lambda0 * g.lambda0 / (8.0 * std::numbers::pi); }

/// Emission rate gamma(r)/gamma0 into one propagation direction of the guide.
inline double decay_rate(const FiberMode& m, const FiberGeometry& g, double r, const Dipole& dipole = {}) {
    if (!(r > g.a)) throw DomainError("decay_rate: r must exceed the fiber radius");
    const auto e = mode_profile(m, g, r);
    double coupling;
    if (dipole.direction) {
        const auto& d = *dipole.direction;
        const double len = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
        if (std::abs(len - 1.0) > 1e-9) throw DomainError("decay_rate: dipole direction must be a unit vector");
        coupling = std::norm(d[0] * e.e_r + d[1] * e.e_phi + d[2] * e.e_z);
    } else {
        coupling = e.intensity();
    }
    return dipole.rate_scale * rate_prefactor(g) * coupling;
}

} // namespace chiralsim
