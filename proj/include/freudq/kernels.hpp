#pragma once

/* Reproducing kernels K(x,y) = sum_k lambda_k^{-1} h_k(x) h_k(y) and their
 * truncation. Truncation indices come from the uniform envelope
 * sup_x |h_k(x)|^2 <= C k^{1/3 - 1/alpha}, so one index serves every x.
 */

#include "freudq/errors.hpp"
#include "freudq/orthopoly.hpp"
#include "freudq/spaces.hpp"
#include "freudq/summation.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

namespace freudq {

inline constexpr int tail_index_cap = 1 << 22;

struct KernelSpec {
    SpaceWeight space;
    int start = 0;
    double trunc_tol = 1e-16;

    void validate() const {
        space.validate();
        detail::require(start >= 0, ErrorKind::invalid_parameter, "start must be nonnegative");
        detail::require(trunc_tol > 0.0, ErrorKind::invalid_parameter, "trunc_tol must be positive");
    }
};

/// Closed-form Mehler kernel sum_k t^{-(k+1)} h_k(x) h_k(y) for alpha = 2.
inline double mehler(double t, double x, double y) {
    detail::require(t > 1.0, ErrorKind::invalid_parameter, "Mehler parameter t must exceed 1");
    const double d = t * t - 1.0;
    return std::sqrt(2.0 / d) *
           std::exp(std::numbers::pi / d * (4.0 * t * x * y - (t * t + 1.0) * (x * x + y * y)));
}

namespace detail {

// Envelope g(k) = lambda_k^{-1} C k^beta written against a lower law for lambda.
struct EnvelopeLaw {
    bool polynomial = true;
    double s = 0.0;        // polynomial: lambda_k >= (1+k)^s / factor
    double p = 1.0, q = 0.0; // exponential: lambda_k >= e^{q k^p} / factor
    double factor = 1.0;
    double beta = 0.0;
    double sup_const = 1.0;

    double inverse_lambda(double k) const {
        return polynomial ? factor * std::pow(1.0 + k, -s) : factor * std::exp(-q * std::pow(k, p));
    }

    double term(int k) const {
        return sup_const * inverse_lambda(k) * std::pow(std::max(k, 1), beta);
    }

    // int_K^inf of the (decreasing) majorant of term().
    double integral_bound(double K) const {
        if (polynomial) {
            const double e = s - beta - 1.0;
            return factor * sup_const * std::pow(K, -e) / e;
        }
        const double a = (beta + 1.0) / p;
        const double x = q * std::pow(K, p);
        return factor * sup_const / p * std::pow(q, -a) * boost::math::tgamma(a, x);
    }

    // First K from which the majorant decreases.
    double decreasing_from() const {
        if (polynomial || beta <= 0.0) return 1.0;
        return std::ceil(std::pow(beta / (q * p), 1.0 / p));
    }
};

inline EnvelopeLaw envelope_law(const SpaceWeight& space, double alpha, double sup_const) {
    const double pi = std::numbers::pi;
    EnvelopeLaw law;
    law.beta = 1.0 / 3.0 - 1.0 / alpha;
    law.sup_const = sup_const;
    switch (space.kind) {
    case SpaceKind::poly:
        law.s = space.s;
        break;
    case SpaceKind::mod_poly:
        // mu_k(s) >= (1+k)^s / (2 pi^s): Jensen for s >= 1, Wendel's bound below.
        law.s = space.s;
        law.factor = 2.0 * std::pow(pi, space.s);
        break;
    case SpaceKind::exp:
        law.polynomial = false;
        law.p = space.p;
        law.q = space.q;
        break;
    case SpaceKind::mod_exp:
        law.polynomial = false;
        law.p = 0.5;
        law.q = space.s / std::sqrt(pi);
        break;
    case SpaceKind::mod_exp2:
        law.polynomial = false;
        law.p = 1.0;
        law.q = std::log(space.mehler_t());
        law.factor = 1.0 / space.mehler_t();
        break;
    }
    return law;
}

} // namespace detail

/// Envelope term lambda_k^{-1} C k^{1/3-1/alpha} used by tail_index.
inline double envelope_term(const SpaceWeight& space, int k, double alpha, double sup_const) {
    return detail::envelope_law(space, alpha, sup_const).term(k);
}

/// Smallest K >= start-1 with sum_{k>K} lambda_k^{-1} C k^{1/3-1/alpha} < tol.
inline int tail_index(const SpaceWeight& space, int start, double tol, double alpha,
                      double sup_const) {
    space.validate();
    detail::require(tol > 0.0, ErrorKind::invalid_parameter, "tol must be positive");
    detail::require(start >= 0, ErrorKind::invalid_parameter, "start must be nonnegative");
    detail::require(alpha > 1.0, ErrorKind::invalid_parameter, "alpha must exceed 1");
    const auto law = detail::envelope_law(space, alpha, sup_const);

    if (law.polynomial && law.s - law.beta <= 1.0)
        throw Error(ErrorKind::unbounded_tail,
                    "envelope series diverges for s = " + std::to_string(law.s) + " (need s > " +
                        std::to_string(1.0 + law.beta) + ")");
    if (!law.polynomial && law.q <= 0.0)
        throw Error(ErrorKind::unbounded_tail, "exponential weight without growth");

    const int lower = std::max(start - 1, 0);
    double hi = std::max({1.0, law.decreasing_from(), double(lower)});
    while (!(law.integral_bound(hi) < tol)) {
        hi *= 2.0;
        if (hi > tail_index_cap)
        {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.3e", tol);
            throw Error(ErrorKind::unbounded_tail,
                        std::string("tail bound does not reach ") + buf + " below index " +
                            std::to_string(tail_index_cap),
                        tail_index_cap);
        }
    }
    double lo = std::max({1.0, law.decreasing_from(), double(lower)});
    if (law.integral_bound(lo) < tol) {
        hi = lo;
    } else {
        while (hi - lo > 1.0) {
            const double mid = std::floor(0.5 * (lo + hi));
            (law.integral_bound(mid) < tol ? hi : lo) = mid;
        }
    }

    // Exact partial sums below the integral-bound index.
    int K = static_cast<int>(hi);
    double tail = law.integral_bound(hi);
    while (K - 1 >= lower) {
        const double next = tail + law.term(K);
        if (!(next < tol)) break;
        tail = next;
        --K;
    }
    return K;
}

/// sum_{k=start}^{K} lambda_k^{-1} h_k(x) h_k(y) for an explicit K.
inline double kernel_partial_sum(const FreudBasis& basis, const SpaceWeight& space, int start,
                                 int K, double x, double y) {
    space.validate();
    detail::require(start >= 0, ErrorKind::invalid_parameter, "start must be nonnegative");
    if (K < start) return 0.0;
    if (K > basis.n_max())
        throw Error(ErrorKind::capacity_exceeded,
                    "kernel truncation needs K = " + std::to_string(K), K);
    const std::array<double, 2> pts{x, y};
    BasisWalker walk(basis, pts);
    CompensatedSum acc;
    for (int k = 0; k <= K; ++k) {
        if (k > 0) walk.advance();
        if (k >= start) {
            const auto v = walk.values();
            acc.add(v[0] * v[1] / lambda_of(space, k));
        }
    }
    return acc.value();
}

/// Truncated kernel with K from tail_index, so the neglected mass is below tol.
inline double truncated_kernel(const FreudBasis& basis, const SpaceWeight& space, int start,
                               double x, double y, double tol) {
    const int K = tail_index(space, start, tol, basis.alpha(), basis.sup_const());
    return kernel_partial_sum(basis, space, start, K, x, y);
}

inline double truncated_kernel(const FreudBasis& basis, const KernelSpec& spec, double x, double y) {
    spec.validate();
    return truncated_kernel(basis, spec.space, spec.start, x, y, spec.trunc_tol);
}

} // namespace freudq
