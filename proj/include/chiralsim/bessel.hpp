#pragma once

// Cylindrical Bessel functions needed by the guided-mode solver:
// J0, J1 (core) and K0, K1, K2 (cladding), plus the derivatives J1' and K1'.

#include <cmath>
#include <string>

#include "chiralsim/errors.hpp"

namespace chiralsim::bessel {

enum class Kind { J, K };

inline void check_order(int order) {
    if (order < 0 || order > 2) throw DomainError("bessel: order must be in 0..2, got " + std::to_string(order));
}

/// Modified Bessel function of the second kind K_p(x), p in {0,1,2}, x > 0.
inline double K(int order, double x) {
    check_order(order);
    if (!(x > 0.0)) throw DomainError("bessel: K_p requires x > 0");
    return std::cyl_bessel_k(static_cast<double>(order), x);
}

/// Bessel function of the first kind J_p(x), p in {0,1,2}, x >= 0.
inline double J(int order, double x) {
    check_order(order);
    if (!(x >= 0.0)) throw DomainError("bessel: J_p requires x >= 0");
    return std::cyl_bessel_j(static_cast<double>(order), x);
}

// K1'(x) = -K0(x) - K1(x)/x
inline double K1_prime(double x) { return -K(0, x) - K(1, x) / x; }

// J1'(x) = J0(x) - J1(x)/x, with the x -> 0 limit 1/2.
inline double J1_prime(double x) {
    if (x == 0.0) return 0.5;
    return J(0, x) - J(1, x) / x;
}

inline double bessel_suite(Kind kind, int order, double x) {
    return kind == Kind::K ? K(order, x) : J(order, x);
}

} // namespace chiralsim::bessel
