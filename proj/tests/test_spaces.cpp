#include "freudq/spaces.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace freudq;

namespace {

const double pi = std::numbers::pi;

// (1/k!) int_0^inf t^k w(t) e^{-t} dt with t = u^2 and composite Simpson in u.
template <typename W>
double moment_oracle(int k, W w) {
    const long double hi = std::sqrt(k + 60.0L * std::sqrt(k + 1.0L) + 80.0L);
    const int m = 200000;
    const long double h = hi / m;
    const long double lg = std::lgamma(k + 1.0L);
    auto f = [&](long double u) {
        if (u == 0) return 0.0L;
        const long double t = u * u;
        return 2 * u * std::exp(k * std::log(t) - t - lg) * w(t);
    };
    long double s = f(0) + f(hi);
    for (int i = 1; i < m; ++i) s += (i % 2 ? 4.0L : 2.0L) * f(i * h);
    return double(s * h / 3);
}

HermiteExpansion basis_element(int k) {
    HermiteExpansion f;
    f.coeffs.assign(k + 1, 0.0);
    f.coeffs[k] = 1.0;
    return f;
}

TEST(LambdaOf, Examples) {
    EXPECT_DOUBLE_EQ(lambda_of(SpaceWeight::poly(2), 3), 16.0);
    EXPECT_NEAR(lambda_of(SpaceWeight::mod_exp2_from_t(1.25), 0), 1.25, 1e-15);
    EXPECT_NEAR(lambda_of(SpaceWeight::exp(1, std::log(1.25)), 2), 1.5625, 1e-15);
    EXPECT_NEAR(lambda_of(SpaceWeight::mod_exp(1.0), 9), std::exp(3 / std::sqrt(pi)), 1e-13);
}

TEST(LambdaOf, Validation) {
    EXPECT_THROW(lambda_of(SpaceWeight::poly(-1), 0), Error);
    EXPECT_THROW(lambda_of(SpaceWeight::exp(0, 1), 0), Error);
    EXPECT_THROW(lambda_of(SpaceWeight::exp(1, 0), 0), Error);
    EXPECT_THROW(lambda_of(SpaceWeight::mod_exp2(pi), 0), Error);
    EXPECT_THROW(lambda_of(SpaceWeight::poly(1), -1), Error);
    EXPECT_TRUE(SpaceWeight::poly(0).no_decay());
    EXPECT_FALSE(SpaceWeight::exp(1, 1).no_decay());
}

TEST(LambdaOf, CoefficientEquivalents) {
    const auto e = SpaceWeight::mod_exp(0.7).coefficient_equivalent();
    EXPECT_EQ(e.kind, SpaceKind::exp);
    EXPECT_DOUBLE_EQ(e.p, 0.5);
    EXPECT_DOUBLE_EQ(e.q, 0.7 / std::sqrt(pi));
    const auto g = SpaceWeight::mod_exp2_from_t(1.25).coefficient_equivalent();
    for (int k = 0; k < 10; ++k)
        EXPECT_NEAR(lambda_of(g, k) * 1.25, lambda_of(SpaceWeight::mod_exp2_from_t(1.25), k),
                    1e-12 * lambda_of(g, k));
}

TEST(CoeffNormSq, Examples) {
    EXPECT_NEAR(coeff_norm_sq(SpaceWeight::poly(1.5), basis_element(4)), std::pow(5, 1.5), 1e-13);
    HermiteExpansion f{{0.3, -1.2, 0.5, 2.0}};
    EXPECT_NEAR(coeff_norm_sq(SpaceWeight::poly(0), f), 0.09 + 1.44 + 0.25 + 4.0, 1e-14);
    // f_k = t^{-k/2}: each term is 1, so the norm counts the coefficients.
    const double t = 1.25;
    HermiteExpansion g;
    for (int k = 0; k < 30; ++k) g.coeffs.push_back(std::pow(t, -k / 2.0));
    EXPECT_NEAR(coeff_norm_sq(SpaceWeight::exp(1, std::log(t)), g), 30.0, 1e-12);
    EXPECT_THROW(coeff_norm_sq(SpaceWeight::poly(1), HermiteExpansion{{1.0, std::nan("")}}), Error);
}

TEST(RadialMoment, Examples) {
    const double s = SpaceWeight::mod_exp2_from_t(1.25).s;
    EXPECT_NEAR(radial_moment(SpaceKind::mod_exp2, s, 3), std::pow(1.25, 4), 1e-13);
    for (int k : {0, 1, 7, 50}) EXPECT_NEAR(radial_moment(SpaceKind::mod_poly, 0, k), 1.0, 1e-14);
    EXPECT_NEAR(radial_moment(SpaceKind::mod_poly, 1, 2), 1 + 3 / pi, 1e-14);
}

TEST(RadialMoment, IntegerSMatchesOracle) {
    for (double s : {1.0, 2.0, 3.0})
        for (int k : {0, 1, 5, 40, 150}) {
            const double ref = moment_oracle(k, [&](long double t) { return std::pow(1 + t / pi, s); });
            EXPECT_NEAR(radial_moment(SpaceKind::mod_poly, s, k), ref, 1e-10 * ref) << s << " " << k;
        }
}

TEST(RadialMoment, QuadraturePathsMatchOracle) {
    for (int k : {0, 1, 3, 25, 120}) {
        const double r1 = moment_oracle(k, [](long double t) { return std::pow(1 + t / pi, 0.5L); });
        EXPECT_NEAR(radial_moment(SpaceKind::mod_poly, 0.5, k), r1, 1e-10 * r1) << k;
        const double r2 = moment_oracle(k, [](long double t) { return std::exp(std::sqrt(t / pi)); });
        EXPECT_NEAR(radial_moment(SpaceKind::mod_exp, 1.0, k), r2, 1e-10 * r2) << k;
    }
}

TEST(RadialMoment, RejectsCoefficientSpaces) {
    EXPECT_THROW(radial_moment(SpaceKind::poly, 1, 0), Error);
}

TEST(ModulationNorm, Examples) {
    const double s = SpaceWeight::mod_exp2_from_t(1.25).s;
    for (int k = 0; k <= 15; ++k)
        EXPECT_NEAR(modulation_norm_sq(SpaceKind::mod_exp2, s, basis_element(k)),
                    std::pow(1.25, k + 1), 1e-10 * std::pow(1.25, k + 1));
    EXPECT_NEAR(modulation_norm_sq(SpaceKind::mod_poly, 0, basis_element(0)), 1.0, 1e-15);
    EXPECT_NEAR(modulation_norm_sq(SpaceKind::mod_poly, 1, basis_element(2)), 1 + 3 / pi, 1e-14);
    HermiteExpansion f{{1.0}, 4.0};
    try {
        modulation_norm_sq(SpaceKind::mod_poly, 1, f);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::unsupported_alpha);
    }
}

TEST(ModulationNormProperty, ExponentialEquivalence) {
    // Measured interval of mu_k e^{-(s/sqrt pi) sqrt k} on k in [10, 400].
    for (double s : {0.5, 1.0, 2.0}) {
        double lo = 1e300, hi = 0;
        for (int k = 10; k <= 400; ++k) {
            const double r = modulation_norm_sq(SpaceKind::mod_exp, s, basis_element(k)) *
                             std::exp(-s / std::sqrt(pi) * std::sqrt(double(k)));
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
        EXPECT_GT(lo, 1.0);
        EXPECT_LT(hi, 1.5);
    }
}

TEST(ModulationNormProperty, PolynomialRatioTendsToPiPower) {
    for (double s : {1.0, 2.0}) {
        const double r = modulation_norm_sq(SpaceKind::mod_poly, s, basis_element(5000)) /
                         std::pow(5001.0, s);
        EXPECT_NEAR(r, std::pow(pi, -s), 2e-3 * std::pow(pi, -s));
    }
}

TEST(StftGrid, Examples) {
    GridSpec grid;
    const double s = SpaceWeight::mod_exp2_from_t(1.25).s;
    EXPECT_NEAR(stft_grid_norm_sq(SpaceKind::mod_exp2, s, basis_element(1), grid), 1.5625,
                1e-4 * 1.5625);
    EXPECT_NEAR(stft_grid_norm_sq(SpaceKind::mod_poly, 0, basis_element(0), grid), 1.0, 1e-6);
    HermiteExpansion f{{std::sqrt(0.5), 0, 0, std::sqrt(0.5)}};
    const double d = modulation_norm_sq(SpaceKind::mod_poly, 1, f);
    EXPECT_NEAR(stft_grid_norm_sq(SpaceKind::mod_poly, 1, f, grid), d, 1e-4 * d);
}

TEST(StftGrid, DiagonalAgreesOnRandomExpansions) {
    std::mt19937_64 gen(11);
    std::normal_distribution<double> nd;
    GridSpec grid;
    struct Case {
        SpaceKind kind;
        double s;
    };
    for (const Case c : {Case{SpaceKind::mod_poly, 1.0}, Case{SpaceKind::mod_poly, 0.5},
                         Case{SpaceKind::mod_exp, 1.0}, Case{SpaceKind::mod_exp2, pi / 5}}) {
        for (int rep = 0; rep < 3; ++rep) {
            HermiteExpansion f;
            for (int k = 0; k < 8; ++k) f.coeffs.push_back(nd(gen));
            const double d = modulation_norm_sq(c.kind, c.s, f);
            EXPECT_NEAR(stft_grid_norm_sq(c.kind, c.s, f, grid), d, 1e-4 * d);
        }
    }
}

TEST(StftGrid, InsufficientGrid) {
    GridSpec small{1.0, 41};
    try {
        stft_grid_norm_sq(SpaceKind::mod_poly, 1, basis_element(3), small);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::grid_insufficient);
    }
}

} // namespace
