#pragma once

/* Orthonormal weighted basis h_k = H_k W for Freud weights W(x) = exp(-pi |x|^alpha).
 *
 * The polynomials H_k are never formed. The three-term recurrence is run on
 * the weighted functions directly, with a running log-scale so that neither
 * W (which underflows for large |x|) nor H_k (which overflows) is ever
 * materialized on its own.
 */

#include "freudq/errors.hpp"
#include "freudq/summation.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace freudq {

inline double weight_value(double alpha, double x) {
    detail::require(alpha > 1.0, ErrorKind::invalid_parameter, "alpha must exceed 1");
    return std::exp(-std::numbers::pi * std::pow(std::abs(x), alpha));
}

/// Mhaskar-Rahmanov-Saff number m_{n,alpha}.
inline double mrs_number(double alpha, double n) {
    detail::require(alpha > 1.0, ErrorKind::invalid_parameter, "alpha must exceed 1");
    detail::require(n >= 1.0, ErrorKind::invalid_parameter, "n must be at least 1");
    const double g = std::tgamma(alpha / 2.0);
    const double base = g * g / (4.0 * std::tgamma(alpha));
    return 2.0 / std::sqrt(std::numbers::pi) * std::pow(base, 1.0 / alpha) *
           std::pow(n, 1.0 / alpha);
}

struct StieltjesOptions {
    double ortho_tol = 1e-8;
    double coeff_tol = 1e-13;
    int panel_order = 20;
    int max_doublings = 10;
};

namespace detail {

// Gauss-Legendre nodes/weights on [-1, 1].
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int m) {
    std::vector<double> x(m), w(m);
    for (int i = 0; i < (m + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 1; j <= m; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
            }
            dp = m * (z * p0 - p1) / (z * z - 1.0);
            double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        x[i] = -z;
        x[m - 1 - i] = z;
        w[i] = w[m - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    return {x, w};
}

// Composite Gauss-Legendre rule on [-r, r] with `panels` equal panels.
inline std::pair<std::vector<double>, std::vector<double>>
composite_legendre(double r, int panels, int order) {
    auto [gx, gw] = gauss_legendre(order);
    std::vector<double> x, w;
    x.reserve(static_cast<std::size_t>(panels) * order);
    w.reserve(x.capacity());
    const double h = 2.0 * r / panels;
    for (int p = 0; p < panels; ++p) {
        const double mid = -r + (p + 0.5) * h;
        for (int i = 0; i < order; ++i) {
            x.push_back(mid + 0.5 * h * gx[i]);
            w.push_back(0.5 * h * gw[i]);
        }
    }
    return {x, w};
}

constexpr double rescale_threshold = 1e150;

} // namespace detail

class FreudBasis {
public:
    /// `coeffs` holds a_1..a_N of x h_k = a_{k+1} h_{k+1} + a_k h_{k-1}.
    FreudBasis(double alpha, double c0, std::vector<double> coeffs)
        : alpha_(alpha), c0_(c0), coeffs_(std::move(coeffs)) {
        detail::require(alpha_ > 1.0, ErrorKind::invalid_parameter, "alpha must exceed 1");
        detail::require(c0_ > 0.0, ErrorKind::invalid_parameter, "c0 must be positive");
        detail::require(!coeffs_.empty(), ErrorKind::invalid_parameter, "need at least one coefficient");
        for (std::size_t k = 0; k < coeffs_.size(); ++k)
            detail::require(coeffs_[k] > 0.0 && std::isfinite(coeffs_[k]),
                            ErrorKind::invalid_parameter, "recurrence coefficients must be positive",
                            static_cast<std::int64_t>(k + 1));
        sup_const_ = measure_sup_const();
    }

    double alpha() const { return alpha_; }
    double c0() const { return c0_; }
    int n_max() const { return static_cast<int>(coeffs_.size()); }
    std::span<const double> coeffs() const { return coeffs_; }

    // a_k for 1 <= k <= n_max; a_0 is taken as 0.
    double a(int k) const { return k == 0 ? 0.0 : coeffs_[static_cast<std::size_t>(k - 1)]; }

    /// Measured envelope constant C with sup_x |h_k(x)|^2 <= C k^{1/3 - 1/alpha}
    /// (max over k <= min(512, n_max), times a safety factor 4).
    double sup_const() const { return sup_const_; }

    /// h_0(x), ..., h_{out.size()-1}(x).
    void eval(double x, std::span<double> out) const {
        if (out.empty()) return;
        const int n = static_cast<int>(out.size()) - 1;
        check_capacity(n);
        double log_scale = std::log(c0_) - std::numbers::pi * std::pow(std::abs(x), alpha_);
        double scale = std::exp(log_scale);
        double prev = 0.0, cur = 1.0;
        out[0] = scale;
        for (int k = 0; k < n; ++k) {
            double next = (x * cur - a(k) * prev) / a(k + 1);
            prev = cur;
            cur = next;
            if (std::abs(cur) > detail::rescale_threshold) {
                cur /= detail::rescale_threshold;
                prev /= detail::rescale_threshold;
                log_scale += std::log(detail::rescale_threshold);
                scale = std::exp(log_scale);
            }
            out[static_cast<std::size_t>(k + 1)] = cur * scale;
        }
    }

    std::vector<double> eval(double x, int n) const {
        detail::require(n >= 0, ErrorKind::invalid_parameter, "n must be nonnegative");
        check_capacity(n);
        std::vector<double> out(static_cast<std::size_t>(n) + 1);
        eval(x, out);
        return out;
    }

    /// Ratio h_n(x) / h_n'(x), computed from the scaled value and derivative
    /// recurrences (the common scale cancels). Used for Newton steps on zeros.
    double newton_ratio(double x, int n) const {
        check_capacity(n);
        const double ax = std::abs(x);
        // h_0' / h_0 = -pi alpha |x|^{alpha-1} sign(x)
        const double dlog = -std::numbers::pi * alpha_ * std::pow(ax, alpha_ - 1.0) *
                            (x < 0 ? -1.0 : 1.0);
        double prev = 0.0, cur = 1.0;
        double dprev = 0.0, dcur = dlog;
        for (int k = 0; k < n; ++k) {
            double next = (x * cur - a(k) * prev) / a(k + 1);
            double dnext = (cur + x * dcur - a(k) * dprev) / a(k + 1);
            prev = cur;
            cur = next;
            dprev = dcur;
            dcur = dnext;
            const double big = std::max(std::abs(cur), std::abs(dcur));
            if (big > detail::rescale_threshold) {
                cur /= detail::rescale_threshold;
                prev /= detail::rescale_threshold;
                dcur /= detail::rescale_threshold;
                dprev /= detail::rescale_threshold;
            }
        }
        return cur / dcur;
    }

    void check_capacity(int n) const {
        if (n > n_max())
            throw Error(ErrorKind::capacity_exceeded,
                        "basis holds " + std::to_string(n_max()) + " coefficients, index " +
                            std::to_string(n) + " requested",
                        n);
    }

private:
    double measure_sup_const() const {
        const int kmax = std::min(512, n_max());
        const double reach = 1.25 * mrs_number(alpha_, std::max(kmax, 1)) + 1.0;
        const int points = 8192;
        std::vector<double> h(static_cast<std::size_t>(kmax) + 1);
        std::vector<double> peak(h.size(), 0.0);
        for (int i = 0; i <= points; ++i) {
            eval(reach * i / points, h);
            for (std::size_t k = 0; k < h.size(); ++k) peak[k] = std::max(peak[k], h[k] * h[k]);
        }
        double c = peak[0];
        for (int k = 1; k <= kmax; ++k)
            c = std::max(c, peak[static_cast<std::size_t>(k)] *
                                std::pow(double(k), 1.0 / alpha_ - 1.0 / 3.0));
        return 4.0 * c;
    }

    double alpha_;
    double c0_;
    std::vector<double> coeffs_;
    double sup_const_ = 0.0;
};

/// Evaluates h_k at a fixed set of points, one k at a time.
class BasisWalker {
public:
    BasisWalker(const FreudBasis& basis, std::span<const double> xs)
        : basis_(&basis), xs_(xs.begin(), xs.end()), prev_(xs.size(), 0.0),
          cur_(xs.size(), 1.0), log_scale_(xs.size()), scale_(xs.size()), values_(xs.size()) {
        for (std::size_t i = 0; i < xs_.size(); ++i) {
            log_scale_[i] = std::log(basis.c0()) -
                            std::numbers::pi * std::pow(std::abs(xs_[i]), basis.alpha());
            scale_[i] = std::exp(log_scale_[i]);
            values_[i] = scale_[i];
        }
    }

    int index() const { return k_; }
    std::span<const double> values() const { return values_; }

    void advance() {
        basis_->check_capacity(k_ + 1);
        const double ak = basis_->a(k_);
        const double ak1 = basis_->a(k_ + 1);
        for (std::size_t i = 0; i < xs_.size(); ++i) {
            double next = (xs_[i] * cur_[i] - ak * prev_[i]) / ak1;
            prev_[i] = cur_[i];
            cur_[i] = next;
            if (std::abs(next) > detail::rescale_threshold) {
                cur_[i] /= detail::rescale_threshold;
                prev_[i] /= detail::rescale_threshold;
                log_scale_[i] += std::log(detail::rescale_threshold);
                scale_[i] = std::exp(log_scale_[i]);
            }
            values_[i] = cur_[i] * scale_[i];
        }
        ++k_;
    }

private:
    const FreudBasis* basis_;
    std::vector<double> xs_, prev_, cur_, log_scale_, scale_, values_;
    int k_ = 0;
};

inline std::vector<double> eval_basis(const FreudBasis& basis, double x, int n) {
    return basis.eval(x, n);
}

namespace detail {

// (int W^2)^{-1/2} by adaptive Gauss-Kronrod on the half line.
inline double normalization_c0(double alpha) {
    if (alpha == 2.0) return std::pow(2.0, 0.25);
    auto w2 = [alpha](double x) { return std::exp(-2.0 * std::numbers::pi * std::pow(x, alpha)); };
    double err = 0.0;
    const double half = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        w2, 0.0, std::numeric_limits<double>::infinity(), 30, 1e-14, &err);
    if (!(err <= 1e-13 * half))
        throw Error(ErrorKind::quadrature_no_convergence,
                    "normalization integral error estimate " + std::to_string(err));
    return 1.0 / std::sqrt(2.0 * half);
}

// Discretized Stieltjes procedure on the weighted functions.
inline std::vector<double> stieltjes_coefficients(double alpha, double c0, int n_max,
                                                  std::span<const double> x,
                                                  std::span<const double> w) {
    const std::size_t m = x.size();
    std::vector<double> prev(m, 0.0), cur(m), next(m);
    for (std::size_t i = 0; i < m; ++i) cur[i] = c0 * weight_value(alpha, x[i]);
    std::vector<double> a(static_cast<std::size_t>(n_max));
    double a_prev = 0.0;
    for (int k = 0; k < n_max; ++k) {
        CompensatedSum norm;
        for (std::size_t i = 0; i < m; ++i) {
            next[i] = x[i] * cur[i] - a_prev * prev[i];
            norm.add(w[i] * next[i] * next[i]);
        }
        const double ak = std::sqrt(norm.value());
        if (!(ak > 0.0) || !std::isfinite(ak))
            throw Error(ErrorKind::no_convergence, "Stieltjes step degenerated", k + 1);
        for (std::size_t i = 0; i < m; ++i) next[i] /= ak;
        std::swap(prev, cur);
        std::swap(cur, next);
        a[static_cast<std::size_t>(k)] = ak;
        a_prev = ak;
    }
    return a;
}

} // namespace detail

/// Recurrence coefficients for alpha = 2 in closed form, otherwise by a
/// Stieltjes iteration on composite Gauss-Legendre panels over the MRS range,
/// doubling the panel count until the coefficients stabilize.
inline FreudBasis build_basis(double alpha, int n_max, const StieltjesOptions& opts = {}) {
    detail::require(alpha > 1.0, ErrorKind::invalid_parameter, "alpha must exceed 1");
    detail::require(n_max >= 1, ErrorKind::invalid_parameter, "n_max must be at least 1");

    if (alpha == 2.0) {
        std::vector<double> a(static_cast<std::size_t>(n_max));
        for (int k = 1; k <= n_max; ++k)
            a[static_cast<std::size_t>(k - 1)] = std::sqrt(k / (4.0 * std::numbers::pi));
        return FreudBasis(alpha, std::pow(2.0, 0.25), std::move(a));
    }

    const double c0 = detail::normalization_c0(alpha);
    const double radius =
        mrs_number(alpha, 2.0 * n_max) * (1.0 + 3.0 * std::pow(double(n_max), -2.0 / 3.0)) + 2.0;

    int panels = 16;
    while (panels < n_max / 2) panels *= 2;

    std::vector<double> last;
    std::vector<double> ref_x, ref_w;
    for (int d = 0; d <= opts.max_doublings; ++d, panels *= 2) {
        auto [x, w] = detail::composite_legendre(radius, panels, opts.panel_order);
        auto a = detail::stieltjes_coefficients(alpha, c0, n_max, x, w);
        if (!last.empty()) {
            int failing = -1;
            for (int k = 0; k < n_max; ++k) {
                const auto i = static_cast<std::size_t>(k);
                if (std::abs(a[i] - last[i]) > opts.coeff_tol * a[i]) {
                    failing = k + 1;
                    break;
                }
            }
            if (failing < 0) {
                ref_x = std::move(x);
                ref_w = std::move(w);
                last = std::move(a);
                break;
            }
            if (d == opts.max_doublings)
                throw Error(ErrorKind::no_convergence,
                            "recurrence coefficient a_" + std::to_string(failing) +
                                " did not stabilize",
                            failing);
        }
        last = std::move(a);
    }

    FreudBasis basis(alpha, c0, std::move(last));

    // Orthonormality of the recurrence-evaluated functions on the reference
    // rule: all pairs up to 30, plus norms and near neighbours throughout.
    const int full = std::min(n_max, 30);
    std::vector<double> h(static_cast<std::size_t>(n_max) + 1);
    std::vector<std::vector<double>> gram(static_cast<std::size_t>(full) + 1,
                                          std::vector<double>(static_cast<std::size_t>(full) + 1));
    std::vector<double> diag(static_cast<std::size_t>(n_max) + 1), off1(diag.size()), off2(diag.size());
    for (std::size_t i = 0; i < ref_x.size(); ++i) {
        basis.eval(ref_x[i], h);
        const double wi = ref_w[i];
        for (int j = 0; j <= full; ++j)
            for (int k = 0; k <= j; ++k)
                gram[j][k] += wi * h[j] * h[k];
        for (std::size_t k = 0; k < h.size(); ++k) {
            diag[k] += wi * h[k] * h[k];
            if (k >= 1) off1[k] += wi * h[k] * h[k - 1];
            if (k >= 2) off2[k] += wi * h[k] * h[k - 2];
        }
    }
    for (int j = 0; j <= full; ++j)
        for (int k = 0; k <= j; ++k)
            if (std::abs(gram[j][k] - (j == k ? 1.0 : 0.0)) > opts.ortho_tol)
                throw Error(ErrorKind::no_convergence, "orthonormality check failed", j);
    for (std::size_t k = 0; k < diag.size(); ++k)
        if (std::abs(diag[k] - 1.0) > opts.ortho_tol || std::abs(off1[k]) > opts.ortho_tol ||
            std::abs(off2[k]) > opts.ortho_tol)
            throw Error(ErrorKind::no_convergence, "orthonormality check failed",
                        static_cast<std::int64_t>(k));
    return basis;
}

} // namespace freudq
