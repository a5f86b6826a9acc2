#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "chiralsim/errors.hpp"

namespace chiralsim::quad {

struct Result {
    double value = 0.0;
    double error = 0.0;
    int intervals = 0;
};

namespace detail {

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1].
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
Result gk15(F&& f, double lo, double hi) {
    const double c = 0.5 * (lo + hi);
    const double h = 0.5 * (hi - lo);
    const double fc = f(c);
    double kron = fc * kWgk[7];
    double gauss = fc * kWg[3];
    for (int i = 0; i < 7; ++i) {
        const double dx = h * kXgk[i];
        const double fs = f(c - dx) + f(c + dx);
        kron += kWgk[i] * fs;
        if (i % 2 == 1) gauss += kWg[i / 2] * fs;
    }
    return {kron * h, std::abs((kron - gauss) * h), 1};
}

} // namespace detail

/// Globally adaptive Gauss-Kronrod (7/15) integration of f over [lo, hi].
/// Bisects the interval with the largest error estimate until the total
/// error is below rel_tol * |value|.
template <class F>
Result integrate(F&& f, double lo, double hi, double rel_tol = 1e-10, int max_intervals = 2000) {
    struct Piece {
        double lo, hi;
        Result r;
    };
    std::vector<Piece> pieces;
    pieces.push_back({lo, hi, detail::gk15(f, lo, hi)});
    for (;;) {
        double value = 0.0, error = 0.0;
        std::size_t worst = 0;
        for (std::size_t i = 0; i < pieces.size(); ++i) {
            value += pieces[i].r.value;
            error += pieces[i].r.error;
            if (pieces[i].r.error > pieces[worst].r.error) worst = i;
        }
        if (error <= rel_tol * std::abs(value) || error == 0.0)
            return {value, error, static_cast<int>(pieces.size())};
        if (static_cast<int>(pieces.size()) >= max_intervals)
            throw ConvergenceError("adaptive quadrature did not reach the requested tolerance");
        const Piece p = pieces[worst];
        const double mid = 0.5 * (p.lo + p.hi);
        pieces[worst] = {p.lo, mid, detail::gk15(f, p.lo, mid)};
        pieces.push_back({mid, p.hi, detail::gk15(f, mid, p.hi)});
    }
}

} // namespace chiralsim::quad
