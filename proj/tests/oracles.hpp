#pragma once

// Test-side reference computations, independent of the library code paths.

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

// h_k(x) for alpha = 2 through the normalized Hermite functions psi_k(u),
// u = sqrt(2 pi) x, in long double: h_k(x) = (2 pi)^{1/4} psi_k(u).
inline std::vector<long double> hermite_h(long double x, int n) {
    const long double pi = std::numbers::pi_v<long double>;
    const long double u = std::sqrt(2.0L * pi) * x;
    std::vector<long double> psi(static_cast<std::size_t>(n) + 1);
    psi[0] = std::pow(pi, -0.25L) * std::exp(-u * u / 2.0L);
    if (n >= 1) psi[1] = std::sqrt(2.0L) * u * psi[0];
    for (int k = 1; k < n; ++k)
        psi[k + 1] = std::sqrt(2.0L / (k + 1)) * u * psi[k] - std::sqrt((long double)k / (k + 1)) * psi[k - 1];
    const long double f = std::pow(2.0L * pi, 0.25L);
    for (auto& v : psi) v *= f;
    return psi;
}

// Trapezoid rule on [-r, r]; spectrally accurate for smooth, rapidly decaying integrands.
inline double trapezoid(const std::function<double(double)>& f, double r, int points) {
    const double h = 2.0 * r / (points - 1);
    long double s = 0.0L;
    for (int i = 0; i < points; ++i) {
        const double w = (i == 0 || i == points - 1) ? 0.5 : 1.0;
        s += w * f(-r + i * h);
    }
    return static_cast<double>(s * h);
}

// Trapezoid nodes and weights, for reusing basis evaluations.
struct Grid {
    std::vector<double> x, w;
};

inline Grid trapezoid_grid(double r, int points) {
    Grid g;
    const double h = 2.0 * r / (points - 1);
    for (int i = 0; i < points; ++i) {
        g.x.push_back(-r + i * h);
        g.w.push_back((i == 0 || i == points - 1) ? 0.5 * h : h);
    }
    return g;
}

} // namespace oracle
