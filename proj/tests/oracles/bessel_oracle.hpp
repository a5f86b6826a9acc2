#pragma once

// Integral representations, evaluated with Boost quadrature:
//   K_p(x) = int_0^inf exp(-x cosh t) cosh(p t) dt
//   J_p(x) = (1/2pi) int_0^2pi cos(p t - x sin t) dt
// K_p uses Boost exp-sinh quadrature; J_p uses the trapezoid rule, which is
// exponentially convergent for this periodic integrand.

#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>

namespace oracle {

inline double bessel_k_integral(int p, double x) {
    boost::math::quadrature::exp_sinh<double> integrator;
    auto f = [=](double t) {
        if (t > 700.0) return 0.0;
        // cosh(pt) e^{-x cosh t} without overflowing cosh at large t
        return 0.5 * (std::exp(p * t - x * std::cosh(t)) + std::exp(-p * t - x * std::cosh(t)));
    };
    return integrator.integrate(f, 0.0, std::numeric_limits<double>::infinity(), 1e-14);
}

inline double bessel_j_integral(int p, double x) {
    const int n = 1024;
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        const double t = 2.0 * std::numbers::pi * i / n;
        s += std::cos(p * t - x * std::sin(t));
    }
    return s / n;
}

} // namespace oracle
