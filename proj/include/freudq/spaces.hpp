#pragma once

/* Weight sequences lambda_k of the coefficient spaces H^s and E^p_q and of
 * the Gaussian-window modulation spaces M^s, M^s_e, M^s_{e^2}.
 *
 * Modulation norms are evaluated through the Bargmann transform, which sends
 * h_k to sqrt(pi^k/k!) z^k. For a rotation-invariant weight w(|z|) the
 * monomials stay orthogonal, so the norm is diagonal in the Hermite
 * coefficients with radial moments
 *
 *   mu_k = (1/k!) int_0^inf t^k w(sqrt(t/pi)) e^{-t} dt.
 */

#include "freudq/errors.hpp"
#include "freudq/summation.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

namespace freudq {

enum class SpaceKind { poly, exp, mod_poly, mod_exp, mod_exp2 };

struct SpaceWeight {
    SpaceKind kind = SpaceKind::poly;
    double s = 0.0;
    double p = 0.0;
    double q = 0.0;

    static SpaceWeight poly(double s) { return {SpaceKind::poly, s, 0.0, 0.0}; }
    static SpaceWeight exp(double p, double q) { return {SpaceKind::exp, 0.0, p, q}; }
    static SpaceWeight mod_poly(double s) { return {SpaceKind::mod_poly, s, 0.0, 0.0}; }
    static SpaceWeight mod_exp(double s) { return {SpaceKind::mod_exp, s, 0.0, 0.0}; }
    static SpaceWeight mod_exp2(double s) { return {SpaceKind::mod_exp2, s, 0.0, 0.0}; }

    /// M^s_{e^2} with pi/(pi - s) = t.
    static SpaceWeight mod_exp2_from_t(double t) {
        return mod_exp2(std::numbers::pi * (1.0 - 1.0 / t));
    }

    void validate() const {
        switch (kind) {
        case SpaceKind::poly:
        case SpaceKind::mod_poly:
        case SpaceKind::mod_exp:
            detail::require(s >= 0.0, ErrorKind::invalid_parameter, "s must be nonnegative");
            break;
        case SpaceKind::exp:
            detail::require(p > 0.0 && q > 0.0, ErrorKind::invalid_parameter,
                            "p and q must be positive");
            break;
        case SpaceKind::mod_exp2:
            detail::require(s >= 0.0 && s < std::numbers::pi, ErrorKind::invalid_parameter,
                            "mod-exp2 needs 0 <= s < pi");
            break;
        }
    }

    // Zero-parameter spaces have no decay and do not define a useful RKHS.
    bool no_decay() const {
        return kind == SpaceKind::exp ? false : s == 0.0;
    }

    /// Geometric ratio t = pi/(pi - s) of mod-exp2.
    double mehler_t() const { return std::numbers::pi / (std::numbers::pi - s); }

    /// Coefficient-side equivalent: mod-poly(s) -> poly(s),
    /// mod-exp(s) -> exp(1/2, s/sqrt(pi)), mod-exp2(s) -> exp(1, ln t).
    SpaceWeight coefficient_equivalent() const {
        switch (kind) {
        case SpaceKind::mod_poly: return poly(s);
        case SpaceKind::mod_exp: return exp(0.5, s / std::sqrt(std::numbers::pi));
        case SpaceKind::mod_exp2: return exp(1.0, std::log(mehler_t()));
        default: return *this;
        }
    }

    std::string name() const {
        switch (kind) {
        case SpaceKind::poly: return "hs";
        case SpaceKind::exp: return "epq";
        case SpaceKind::mod_poly: return "ms";
        case SpaceKind::mod_exp: return "mse";
        case SpaceKind::mod_exp2: return "mse2";
        }
        return "?";
    }
};

struct HermiteExpansion {
    std::vector<double> coeffs;
    double alpha = 2.0;
};

namespace detail {

// Adaptive Gauss-Kronrod on t in [0, k + 40 sqrt(k+1) + 60], integrated in
// u = sqrt(t) so that weights in sqrt(t) stay smooth at the origin.
template <typename W>
double radial_quadrature(int k, W&& weight) {
    // log(t^k e^{-t} / k!) centred at the peak t = k, where the large terms cancel.
    const double c = k > 0 ? k * std::log(double(k)) - k - std::lgamma(k + 1.0) : 0.0;
    auto f = [&](double u) {
        if (u <= 0.0) return 0.0;
        const double t = u * u;
        const double lp = k > 0 ? k * std::log1p((t - k) / k) - (t - k) + c : -t;
        return 2.0 * u * std::exp(lp) * weight(t);
    };
    const double upper = std::sqrt(k + 40.0 * std::sqrt(k + 1.0) + 60.0);
    double err = 0.0;
    const double val =
        boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, upper, 25, 1e-13, &err);
    if (!(err <= 1e-12 * std::abs(val))) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.3e", err);
        throw Error(ErrorKind::quadrature_no_convergence,
                    "radial moment k=" + std::to_string(k) + " error estimate " + buf, k);
    }
    return val;
}

inline bool is_nonnegative_integer(double s) {
    return s >= 0.0 && s == std::floor(s) && s < 64.0;
}

} // namespace detail

/// mu_k for the rotation-invariant weights (1+|z|^2)^s, e^{s|z|}, e^{s|z|^2}.
inline double radial_moment(SpaceKind kind, double s, int k) {
    detail::require(k >= 0, ErrorKind::invalid_parameter, "k must be nonnegative");
    const double pi = std::numbers::pi;
    switch (kind) {
    case SpaceKind::mod_exp2:
        SpaceWeight::mod_exp2(s).validate();
        return std::pow(pi / (pi - s), k + 1.0);
    case SpaceKind::mod_poly: {
        SpaceWeight::mod_poly(s).validate();
        if (detail::is_nonnegative_integer(s)) {
            // (1 + t/pi)^s expanded: sum_j C(s,j) pi^{-j} (k+1)...(k+j)
            const int si = static_cast<int>(s);
            CompensatedSum acc;
            double term = 1.0;
            for (int j = 0; j <= si; ++j) {
                acc.add(term);
                term *= double(si - j) / (j + 1) * (k + j + 1.0) / pi;
            }
            return acc.value();
        }
        return detail::radial_quadrature(k, [&](double t) { return std::pow(1.0 + t / pi, s); });
    }
    case SpaceKind::mod_exp: {
        SpaceWeight::mod_exp(s).validate();
        return detail::radial_quadrature(k, [&](double t) { return std::exp(s * std::sqrt(t / pi)); });
    }
    default:
        throw Error(ErrorKind::invalid_parameter, "radial moments exist only for modulation spaces");
    }
}

/// lambda_k of the space. For mod-poly this is the exact moment; mod-exp uses
/// its coefficient-side equivalent e^{(s/sqrt(pi)) sqrt(k)}.
inline double lambda_of(const SpaceWeight& space, int k) {
    detail::require(k >= 0, ErrorKind::invalid_parameter, "k must be nonnegative");
    space.validate();
    switch (space.kind) {
    case SpaceKind::poly: return std::pow(1.0 + k, space.s);
    case SpaceKind::exp: return std::exp(space.q * std::pow(double(k), space.p));
    case SpaceKind::mod_exp2: return std::pow(space.mehler_t(), k + 1.0);
    case SpaceKind::mod_exp:
        return std::exp(space.s / std::sqrt(std::numbers::pi) * std::sqrt(double(k)));
    case SpaceKind::mod_poly: return radial_moment(SpaceKind::mod_poly, space.s, k);
    }
    return 1.0;
}

/// lambda_0^{-1}, ..., lambda_K^{-1}; computes each moment once.
inline std::vector<double> inverse_lambda_table(const SpaceWeight& space, int K) {
    std::vector<double> out(static_cast<std::size_t>(K) + 1);
    for (int k = 0; k <= K; ++k) out[static_cast<std::size_t>(k)] = 1.0 / lambda_of(space, k);
    return out;
}

inline double coeff_norm_sq(const SpaceWeight& space, const HermiteExpansion& f) {
    space.validate();
    CompensatedSum s;
    for (std::size_t k = 0; k < f.coeffs.size(); ++k) {
        detail::require(std::isfinite(f.coeffs[k]), ErrorKind::invalid_parameter,
                        "expansion coefficients must be finite", static_cast<std::int64_t>(k));
        s.add(lambda_of(space, static_cast<int>(k)) * f.coeffs[k] * f.coeffs[k]);
    }
    return s.value();
}

/// Diagonal (Bargmann) evaluation of the modulation norm: sum_k fhat_k^2 mu_k.
inline double modulation_norm_sq(SpaceKind kind, double s, const HermiteExpansion& f) {
    if (f.alpha != 2.0)
        throw Error(ErrorKind::unsupported_alpha, "modulation norms need alpha = 2");
    CompensatedSum acc;
    for (std::size_t k = 0; k < f.coeffs.size(); ++k) {
        if (f.coeffs[k] == 0.0) continue;
        acc.add(f.coeffs[k] * f.coeffs[k] * radial_moment(kind, s, static_cast<int>(k)));
    }
    return acc.value();
}

struct GridSpec {
    double radius = 8.0;      // half-width of the square in the (x, xi) plane
    int points = 321;         // per axis, including both ends
    double boundary_tol = 1e-18; // allowed boundary/peak integrand ratio
};

namespace detail {

inline double modulation_weight(SpaceKind kind, double s, double r2) {
    switch (kind) {
    case SpaceKind::mod_poly: return std::pow(1.0 + r2, s);
    case SpaceKind::mod_exp: return std::exp(s * std::sqrt(r2));
    case SpaceKind::mod_exp2: return std::exp(s * r2);
    default: throw Error(ErrorKind::invalid_parameter, "not a modulation space");
    }
}

} // namespace detail

/// Direct tensor-trapezoid evaluation of int w(z) |V_phi f(z)|^2 dz, using
/// |V_phi f(z)| = |sum_k fhat_k sqrt(pi^k/k!) conj(z)^k| e^{-pi|z|^2/2}.
inline double stft_grid_norm_sq(SpaceKind kind, double s, const HermiteExpansion& f,
                                const GridSpec& grid) {
    if (f.alpha != 2.0)
        throw Error(ErrorKind::unsupported_alpha, "modulation norms need alpha = 2");
    detail::require(grid.points >= 3 && grid.radius > 0.0, ErrorKind::invalid_parameter,
                    "grid needs a positive radius and at least 3 points");
    const double pi = std::numbers::pi;
    std::vector<double> c(f.coeffs.size());
    for (std::size_t k = 0; k < c.size(); ++k)
        c[k] = f.coeffs[k] * std::exp(0.5 * (k * std::log(pi) - std::lgamma(k + 1.0)));

    auto integrand = [&](double x, double xi) {
        const std::complex<double> zb(x, -xi);
        std::complex<double> poly(0.0, 0.0);
        for (std::size_t k = c.size(); k-- > 0;) poly = poly * zb + c[k];
        const double r2 = x * x + xi * xi;
        return std::norm(poly) * std::exp(-pi * r2) * detail::modulation_weight(kind, s, r2);
    };

    const double h = 2.0 * grid.radius / (grid.points - 1);
    CompensatedSum acc;
    double peak = 0.0, boundary = 0.0;
    for (int i = 0; i < grid.points; ++i) {
        const double x = -grid.radius + i * h;
        for (int j = 0; j < grid.points; ++j) {
            const double xi = -grid.radius + j * h;
            const double v = integrand(x, xi);
            peak = std::max(peak, v);
            const bool edge_i = i == 0 || i == grid.points - 1;
            const bool edge_j = j == 0 || j == grid.points - 1;
            if (edge_i || edge_j) boundary = std::max(boundary, v);
            acc.add(v * (edge_i ? 0.5 : 1.0) * (edge_j ? 0.5 : 1.0));
        }
    }
    if (boundary > grid.boundary_tol * peak)
        throw Error(ErrorKind::grid_insufficient,
                    "boundary integrand " + std::to_string(boundary) + " vs peak " +
                        std::to_string(peak));
    return acc.value() * h * h;
}

} // namespace freudq
