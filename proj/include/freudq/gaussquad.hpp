#pragma once

/* Gauss quadrature for the functional f -> int f W, with nodes at the zeros
 * of h_n and Christoffel weights omega = Lambda_n W.
 */

#include "freudq/errors.hpp"
#include "freudq/orthopoly.hpp"
#include "freudq/summation.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <span>
#include <string>
#include <vector>

namespace freudq {

struct QuadratureRule {
    int n = 0;
    double alpha = 2.0;
    std::vector<double> nodes;
    std::vector<double> omega; // weights for int f W
    std::vector<double> tau;   // Lambda_n at the nodes
};

struct TridiagonalEigen {
    std::vector<double> values;           // ascending
    std::vector<double> first_components; // of the normalized eigenvectors, if requested
};

/// Implicit-shift QL iteration for a symmetric tridiagonal matrix.
/// `off` holds the n-1 off-diagonal entries. Converges when every off-diagonal
/// entry drops below rel_tol * ||J||_inf; at most max_sweeps_per_dim * n sweeps.
inline TridiagonalEigen symmetric_tridiagonal_eigen(std::span<const double> diag,
                                                    std::span<const double> off,
                                                    bool want_first_components,
                                                    double rel_tol = 1e-14,
                                                    int max_sweeps_per_dim = 50) {
    const int n = static_cast<int>(diag.size());
    detail::require(n >= 1, ErrorKind::invalid_parameter, "empty matrix");
    detail::require(static_cast<int>(off.size()) == n - 1, ErrorKind::dimension_mismatch,
                    "off-diagonal must have n-1 entries");

    std::vector<double> d(diag.begin(), diag.end());
    std::vector<double> e(static_cast<std::size_t>(n), 0.0);
    std::copy(off.begin(), off.end(), e.begin());
    std::vector<double> z(static_cast<std::size_t>(n), 0.0);
    if (want_first_components) z[0] = 1.0;

    double norm = 0.0;
    for (int i = 0; i < n; ++i) {
        double row = std::abs(d[i]) + (i > 0 ? std::abs(e[i - 1]) : 0.0) +
                     (i < n - 1 ? std::abs(e[i]) : 0.0);
        norm = std::max(norm, row);
    }
    const double eps = rel_tol * (norm > 0.0 ? norm : 1.0);
    const int cap = max_sweeps_per_dim * n;
    int sweeps = 0;

    for (int l = 0; l < n; ++l) {
        for (;;) {
            int m = l;
            for (; m < n - 1; ++m)
                if (std::abs(e[m]) <= eps) break;
            if (m == l) break;
            if (++sweeps > cap)
                throw Error(ErrorKind::eigensolver_failure,
                            "QL iteration exceeded " + std::to_string(cap) + " sweeps", l);
            double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            double r = std::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
            double s = 1.0, c = 1.0, p = 0.0;
            int i = m - 1;
            for (; i >= l; --i) {
                double f = s * e[i];
                double b = c * e[i];
                r = std::hypot(f, g);
                e[i + 1] = r;
                if (r == 0.0) {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if (want_first_components) {
                    f = z[i + 1];
                    z[i + 1] = s * z[i] + c * f;
                    z[i] = c * z[i] - s * f;
                }
            }
            if (r == 0.0 && i >= l) continue;
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return d[a] < d[b]; });
    TridiagonalEigen out;
    out.values.reserve(d.size());
    for (int i : order) out.values.push_back(d[i]);
    if (want_first_components)
        for (int i : order) out.first_components.push_back(z[i]);
    return out;
}

/// Lambda_n(x) = 1 / sum_{k<=n} h_k(x)^2.
inline double christoffel(const FreudBasis& basis, int n, double x) {
    detail::require(n >= 0, ErrorKind::invalid_parameter, "n must be nonnegative");
    basis.check_capacity(n);
    std::vector<double> h(static_cast<std::size_t>(n) + 1);
    basis.eval(x, h);
    CompensatedSum s;
    for (double v : h) s.add_product(v, v);
    return 1.0 / s.value();
}

inline std::vector<double> jacobi_offdiagonal(const FreudBasis& basis, int n) {
    std::vector<double> off(static_cast<std::size_t>(n > 0 ? n - 1 : 0));
    for (int k = 1; k < n; ++k) off[static_cast<std::size_t>(k - 1)] = basis.a(k);
    return off;
}

/// n-point Gauss rule: eigenvalues of the zero-diagonal Jacobi matrix, one
/// Newton polish on h_n, weights omega = Lambda_n W and tau = Lambda_n.
inline QuadratureRule gauss_rule(const FreudBasis& basis, int n) {
    detail::require(n >= 1, ErrorKind::invalid_parameter, "n must be at least 1");
    if (n > basis.n_max() - 1)
        throw Error(ErrorKind::capacity_exceeded,
                    "Gauss rule of order " + std::to_string(n) + " needs n_max >= " +
                        std::to_string(n + 1),
                    n + 1);

    const std::vector<double> diag(static_cast<std::size_t>(n), 0.0);
    const auto off = jacobi_offdiagonal(basis, n);
    auto eig = symmetric_tridiagonal_eigen(diag, off, false);

    QuadratureRule rule;
    rule.n = n;
    rule.alpha = basis.alpha();
    rule.nodes = std::move(eig.values);
    for (double& x : rule.nodes) {
        const double step = basis.newton_ratio(x, n);
        if (std::isfinite(step)) x -= step;
    }
    // Zero diagonal makes the spectrum symmetric; enforce it exactly.
    for (int i = 0; i < n / 2; ++i) {
        const double m = 0.5 * (rule.nodes[static_cast<std::size_t>(n - 1 - i)] -
                                rule.nodes[static_cast<std::size_t>(i)]);
        rule.nodes[static_cast<std::size_t>(i)] = -m;
        rule.nodes[static_cast<std::size_t>(n - 1 - i)] = m;
    }
    if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;

    rule.tau.reserve(rule.nodes.size());
    rule.omega.reserve(rule.nodes.size());
    for (double x : rule.nodes) {
        const double lam = christoffel(basis, n, x);
        rule.tau.push_back(lam);
        rule.omega.push_back(lam * weight_value(basis.alpha(), x));
    }
    return rule;
}

/// Golub-Welsch weights for the measure W^2 dx: (int W^2) * v_0^2. Independent
/// of the Christoffel route; equals Lambda_n(x) W(x)^2 at each node.
inline std::vector<double> golub_welsch_weights(const FreudBasis& basis, int n) {
    detail::require(n >= 1, ErrorKind::invalid_parameter, "n must be at least 1");
    basis.check_capacity(n);
    const std::vector<double> diag(static_cast<std::size_t>(n), 0.0);
    const auto off = jacobi_offdiagonal(basis, n);
    auto eig = symmetric_tridiagonal_eigen(diag, off, true);
    const double mass = 1.0 / (basis.c0() * basis.c0());
    std::vector<double> w;
    w.reserve(eig.first_components.size());
    for (double v : eig.first_components) w.push_back(mass * v * v);
    return w;
}

/// sum_x omega(x) f(x) in ascending node order with compensated summation.
template <typename F>
double integrate(const QuadratureRule& rule, F&& f) {
    CompensatedSum s;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        double v = 0.0;
        try {
            v = f(rule.nodes[i]);
        } catch (const std::exception& ex) {
            throw Error(ErrorKind::evaluator_failure,
                        "integrand failed at node " + std::to_string(i) + ": " + ex.what(),
                        static_cast<std::int64_t>(i));
        }
        if (!std::isfinite(v))
            throw Error(ErrorKind::evaluator_failure,
                        "integrand not finite at node " + std::to_string(i),
                        static_cast<std::int64_t>(i));
        s.add_product(rule.omega[i], v);
    }
    return s.value();
}

} // namespace freudq
