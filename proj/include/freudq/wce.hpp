#pragma once

/* Worst-case errors of quadrature rules for int f W over weighted spaces.
 * All values are squared worst-case errors.
 */

#include "freudq/errors.hpp"
#include "freudq/kernels.hpp"
#include "freudq/orthopoly.hpp"
#include "freudq/spaces.hpp"
#include "freudq/summation.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace freudq {

struct Me2Result {
    double value = 0.0;
    bool clamped = false;    // a negative cancellation residue was set to 0
    bool degenerate = false; // empty rule: only the integral term remains
};

namespace detail {

using quad = boost::multiprecision::cpp_bin_float_quad;

inline quad mehler_quad(const quad& t, const quad& x, const quad& y) {
    const quad d = t * t - 1;
    const quad pi = boost::math::constants::pi<quad>();
    return sqrt(2 / d) * exp(pi / d * (4 * t * x * y - (t * t + 1) * (x * x + y * y)));
}

} // namespace detail

/// Squared WCE for alpha = 2 under K_t:
///   sum_{x,y} omega omega K_t - (2/t) sum_x omega e^{-pi x^2} + 1/(sqrt2 t).
/// For rules exact on h_0 the last two terms combine to -1/(sqrt2 t); keeping
/// them separate removes the first-order effect of rounding in omega.
/// Accumulated in quad precision since the terms agree to many digits.
inline Me2Result wce_me2(std::span<const double> nodes, std::span<const double> omega, double t) {
    detail::require(t > 1.0, ErrorKind::invalid_parameter, "t must exceed 1");
    detail::require(nodes.size() == omega.size(), ErrorKind::dimension_mismatch,
                    "nodes and omega differ in length");
    using detail::quad;
    const quad tq = t;
    const quad pi = boost::math::constants::pi<quad>();
    const quad integral = 1 / (sqrt(quad(2)) * tq);
    if (nodes.empty()) return {static_cast<double>(integral), false, true};

    quad acc = integral;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const quad wi = omega[i], xi = nodes[i];
        acc -= 2 / tq * wi * exp(-pi * xi * xi);
        acc += wi * wi * detail::mehler_quad(tq, xi, xi);
        for (std::size_t j = i + 1; j < nodes.size(); ++j)
            acc += 2 * wi * quad(omega[j]) * detail::mehler_quad(tq, xi, quad(nodes[j]));
    }
    const double v = static_cast<double>(acc);
    if (v < 0.0) return {0.0, true, false};
    return {v, false, false};
}

/// sum_{k=start}^{K} lambda_k^{-1} e_k^2 with e_k = sum_x omega h_k(x) - c0^{-1} delta_{k0}.
inline double wce_series_to(std::span<const double> nodes, std::span<const double> omega,
                            const FreudBasis& basis, const SpaceWeight& space, int start, int K) {
    space.validate();
    detail::require(start >= 0, ErrorKind::invalid_parameter, "start must be nonnegative");
    detail::require(nodes.size() == omega.size(), ErrorKind::dimension_mismatch,
                    "nodes and omega differ in length");
    if (K < start) return 0.0;
    basis.check_capacity(K);
    const auto inv = inverse_lambda_table(space, K);
    BasisWalker walk(basis, nodes);
    CompensatedSum total;
    for (int k = 0; k <= K; ++k) {
        if (k > 0) walk.advance();
        if (k < start) continue;
        const auto v = walk.values();
        CompensatedSum e;
        for (std::size_t j = 0; j < v.size(); ++j) e.add_product(omega[j], v[j]);
        if (k == 0) e.add(-1.0 / basis.c0());
        const double ek = e.value();
        total.add(inv[static_cast<std::size_t>(k)] * ek * ek);
    }
    return total.value();
}

/// Truncation index used by wce_series: tail below tol times the first
/// retained envelope term.
inline int wce_series_index(const FreudBasis& basis, const SpaceWeight& space, int start,
                            double tol) {
    const double first = envelope_term(space, start, basis.alpha(), basis.sup_const());
    return tail_index(space, start, tol * first, basis.alpha(), basis.sup_const());
}

inline double wce_series(std::span<const double> nodes, std::span<const double> omega,
                         const FreudBasis& basis, const SpaceWeight& space, int start,
                         double tol = 1e-16) {
    const int K = wce_series_index(basis, space, start, tol);
    return wce_series_to(nodes, omega, basis, space, start, K);
}

/// phi_lambda(n) / a_n.
inline double wce_bound(double phi, double a_n) {
    detail::require(a_n > 0.0, ErrorKind::invalid_parameter, "a_n must be positive");
    detail::require(phi >= 0.0, ErrorKind::invalid_parameter, "phi must be nonnegative");
    return phi / a_n;
}

/// Squared WCE of the d-fold tensor rule for tensor weights prod lambda_{k_i}.
inline double tensor_wce(double wce1_sq, double c, double lambda0, int d) {
    detail::require(d >= 1, ErrorKind::invalid_parameter, "d must be at least 1");
    detail::require(wce1_sq >= 0.0, ErrorKind::invalid_parameter, "wce1_sq must be nonnegative");
    detail::require(lambda0 > 0.0, ErrorKind::invalid_parameter, "lambda0 must be positive");
    const double base = c * c / lambda0;
    // (base + w)^d - base^d = sum_{j>=1} C(d,j) base^{d-j} w^j, free of cancellation.
    CompensatedSum s;
    double binom = 1.0;
    for (int j = 1; j <= d; ++j) {
        binom = binom * (d - j + 1) / j;
        s.add(binom * std::pow(base, d - j) * std::pow(wce1_sq, j));
    }
    return s.value();
}

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
};

inline LinearFit slope_fit(std::span<const double> xs, std::span<const double> ys) {
    detail::require(xs.size() == ys.size(), ErrorKind::dimension_mismatch,
                    "xs and ys differ in length");
    detail::require(xs.size() >= 2, ErrorKind::degenerate_abscissa, "need at least two points");
    const double n = static_cast<double>(xs.size());
    const double mx = compensated_sum(xs) / n;
    const double my = compensated_sum(ys) / n;
    CompensatedSum sxx, sxy;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx.add((xs[i] - mx) * (xs[i] - mx));
        sxy.add((xs[i] - mx) * (ys[i] - my));
    }
    detail::require(sxx.value() > 0.0, ErrorKind::degenerate_abscissa, "abscissae are all equal");
    const double slope = sxy.value() / sxx.value();
    return {slope, my - slope * mx};
}

enum class Axis { n, sqrt_n, log10_n };

inline std::string to_string(Axis a) {
    switch (a) {
    case Axis::n: return "n";
    case Axis::sqrt_n: return "sqrt-n";
    case Axis::log10_n: return "log10-n";
    }
    return "?";
}

inline double axis_value(Axis a, int n) {
    switch (a) {
    case Axis::n: return n;
    case Axis::sqrt_n: return std::sqrt(double(n));
    case Axis::log10_n: return std::log10(double(n));
    }
    return n;
}

struct WCERow {
    int n = 0;
    double wce = 0.0;
    bool clamped = false;
    bool failed = false;
    std::string error;
};

using ParamValue = std::variant<double, std::int64_t, std::string, std::vector<int>>;

struct WCETable {
    std::string space;
    std::map<std::string, ParamValue> params;
    Axis axis = Axis::n;
    std::vector<WCERow> rows;
    double slope = std::nan("");
    double intercept = std::nan("");
    double theory_slope = std::nan("");
    std::uint64_t seed = 0;

    /// OLS of log10 wce against the axis over rows that succeeded with wce > 0.
    /// Leaves slope and intercept NaN when fewer than two such rows exist.
    void fit() {
        std::vector<double> xs, ys;
        for (const auto& r : rows) {
            if (r.failed || !(r.wce > 0.0)) continue;
            xs.push_back(axis_value(axis, r.n));
            ys.push_back(std::log10(r.wce));
        }
        if (xs.size() < 2) return;
        const auto f = slope_fit(xs, ys);
        slope = f.slope;
        intercept = f.intercept;
    }
};

} // namespace freudq
