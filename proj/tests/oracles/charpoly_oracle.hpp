#pragma once

// Eigenvalues of a small complex matrix as roots of its characteristic
// polynomial: Faddeev-LeVerrier coefficients, Aberth-Ehrlich simultaneous
// root iteration. No companion matrix, no QR.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using lcplx = std::complex<long double>;

/// Coefficients c[0..n] of det(lambda I - A) = sum c[k] lambda^k, c[n] = 1.
inline std::vector<lcplx> charpoly(const Eigen::MatrixXcd& A0) {
    const int n = static_cast<int>(A0.rows());
    using M = Eigen::Matrix<lcplx, Eigen::Dynamic, Eigen::Dynamic>;
    const M A = A0.cast<lcplx>();
    std::vector<lcplx> c(n + 1);
    c[n] = 1;
    M Mk = M::Zero(n, n);
    for (int k = 1; k <= n; ++k) {
        Mk = A * Mk + c[n - k + 1] * M::Identity(n, n);
        c[n - k] = -(A * Mk).trace() / static_cast<long double>(k);
    }
    return c;
}

inline std::vector<std::complex<double>> polynomial_roots(const std::vector<lcplx>& c) {
    const int n = static_cast<int>(c.size()) - 1;
    long double bound = 0;
    for (int k = 0; k < n; ++k) bound = std::max(bound, std::abs(c[k] / c[n]));
    const long double radius = 1 + bound;

    std::vector<lcplx> z(n);
    for (int i = 0; i < n; ++i)
        z[i] = std::polar(radius * 0.5L, 2 * std::numbers::pi_v<long double> * i / n + 0.4L);

    auto eval = [&](lcplx x, lcplx& p, lcplx& dp) {
        p = c[n];
        dp = 0;
        for (int k = n - 1; k >= 0; --k) {
            dp = dp * x + p;
            p = p * x + c[k];
        }
    };
    for (int it = 0; it < 2000; ++it) {
        long double moved = 0;
        for (int i = 0; i < n; ++i) {
            lcplx p, dp;
            eval(z[i], p, dp);
            if (p == lcplx(0)) continue;
            const lcplx ratio = p / dp;
            lcplx sum = 0;
            for (int j = 0; j < n; ++j)
                if (j != i) sum += 1.0L / (z[i] - z[j]);
            const lcplx w = ratio / (1.0L - ratio * sum);
            z[i] -= w;
            moved = std::max(moved, std::abs(w) / (1 + std::abs(z[i])));
        }
        if (moved < 1e-18L) break;
    }
    std::vector<std::complex<double>> out;
    for (auto& x : z) out.emplace_back(static_cast<double>(x.real()), static_cast<double>(x.imag()));
    return out;
}

inline std::vector<std::complex<double>> eigenvalues(const Eigen::MatrixXcd& A) { return polynomial_roots(charpoly(A)); }

/// Largest distance in an optimal-greedy matching of two eigenvalue sets.
inline double match_distance(std::vector<std::complex<double>> a, std::vector<std::complex<double>> b) {
    double worst = 0;
    while (!a.empty()) {
        std::size_t bi = 0, bj = 0;
        double best = 1e300;
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < b.size(); ++j)
                if (std::abs(a[i] - b[j]) < best) best = std::abs(a[i] - b[j]), bi = i, bj = j;
        worst = std::max(worst, best);
        a.erase(a.begin() + bi);
        b.erase(b.begin() + bj);
    }
    return worst;
}

} // namespace oracle
