#include "freudq/gaussquad.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

using namespace freudq;

namespace {

const double pi = std::numbers::pi;

TEST(GaussRule, TwoNodes) {
    const auto b = build_basis(2, 4);
    const auto r = gauss_rule(b, 2);
    ASSERT_EQ(r.nodes.size(), 2u);
    EXPECT_NEAR(r.nodes[0], -std::sqrt(1 / (4 * pi)), 1e-15);
    EXPECT_NEAR(r.nodes[1], std::sqrt(1 / (4 * pi)), 1e-15);
}

TEST(GaussRule, MatchesOracleZeros) {
    // Nodes are zeros of h_n: the independent long-double h_n vanishes there.
    const auto b = build_basis(2, 41);
    const auto r = gauss_rule(b, 40);
    for (double x : r.nodes) {
        const auto h = oracle::hermite_h(x, 40);
        const auto hm = oracle::hermite_h(x, 39);
        EXPECT_LT(std::abs(double(h[40])), 1e-13 * std::abs(double(hm[39])) + 1e-300);
    }
}

TEST(GaussRule, ExactnessN21) {
    const auto b = build_basis(2, 22);
    const auto r = gauss_rule(b, 21);
    for (int k = 0; k <= 41; ++k) {
        const double v = integrate(r, [&](double x) { return double(oracle::hermite_h(x, k)[k]); });
        EXPECT_NEAR(v, k == 0 ? std::pow(2.0, -0.25) : 0.0, 1e-9) << k;
    }
}

TEST(GaussRule, DegreeSharpness) {
    const auto b = build_basis(2, 64);
    for (int n : {3, 8, 15}) {
        const auto r = gauss_rule(b, n);
        double below = 0;
        for (int k = 1; k < 2 * n; ++k)
            below = std::max(below, std::abs(integrate(r, [&](double x) { return b.eval(x, k)[k]; })));
        const double at = integrate(r, [&](double x) { return b.eval(x, 2 * n)[2 * n]; });
        EXPECT_GT(std::abs(at), 1e-6) << n;
        EXPECT_GT(std::abs(at), 1e4 * below) << n;
    }
}

TEST(GaussRule, StructuralInvariants) {
    for (double alpha : {2.0, 4.0}) {
        const auto b = build_basis(alpha, 41);
        for (int n = 1; n <= 40; ++n) {
            const auto r = gauss_rule(b, n);
            ASSERT_EQ(r.nodes.size(), std::size_t(n));
            for (int i = 0; i < n; ++i) {
                if (i > 0) EXPECT_LT(r.nodes[i - 1], r.nodes[i]);
                EXPECT_NEAR(r.nodes[i], -r.nodes[n - 1 - i], 1e-12);
                EXPECT_GT(r.omega[i], 0.0);
                EXPECT_GT(r.tau[i], 0.0);
            }
            const double bound = mrs_number(alpha, n) * (1 + 3 * std::pow(n, -2.0 / 3.0));
            EXPECT_LE(std::abs(r.nodes.back()), bound) << alpha << " " << n;
        }
    }
}

TEST(GaussRule, WeightSumBound) {
    const auto b2 = build_basis(2, 41);
    const auto b4 = build_basis(4, 41);
    const double bound4 = 2 * std::pow(pi, -0.25) * std::tgamma(1.25);
    for (int n = 1; n <= 40; ++n) {
        EXPECT_LE(compensated_sum(gauss_rule(b2, n).omega), 1 + 1e-10) << n;
        EXPECT_LE(compensated_sum(gauss_rule(b4, n).omega), bound4 + 1e-10) << n;
    }
}

TEST(GaussRule, Interlacing) {
    const auto b = build_basis(2, 41);
    for (int n = 1; n < 40; ++n) {
        const auto r = gauss_rule(b, n), s = gauss_rule(b, n + 1);
        for (int i = 0; i < n; ++i) {
            EXPECT_LT(s.nodes[i], r.nodes[i]);
            EXPECT_LT(r.nodes[i], s.nodes[i + 1]);
        }
    }
}

TEST(GaussRule, GolubWelschCrossCheck) {
    for (double alpha : {2.0, 4.0}) {
        const auto b = build_basis(alpha, 31);
        for (int n : {1, 2, 7, 20, 30}) {
            const auto r = gauss_rule(b, n);
            const auto gw = golub_welsch_weights(b, n);
            for (int i = 0; i < n; ++i) {
                const double w = weight_value(alpha, r.nodes[i]);
                EXPECT_NEAR(gw[i], r.tau[i] * w * w, 1e-10 * gw[i]);
                EXPECT_NEAR(gw[i] / w, r.omega[i], 1e-10 * r.omega[i]);
            }
        }
    }
}

TEST(GaussRule, CapacityExceeded) {
    const auto b = build_basis(2, 5);
    EXPECT_NO_THROW(gauss_rule(b, 4));
    try {
        gauss_rule(b, 5);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::capacity_exceeded);
    }
}

TEST(TridiagonalEigen, IterationCap) {
    const std::vector<double> d{0, 0, 0, 0}, e{1, 2, 3};
    try {
        symmetric_tridiagonal_eigen(d, e, false, 1e-14, 0);
        FAIL();
    } catch (const Error& err) {
        EXPECT_EQ(err.kind(), ErrorKind::eigensolver_failure);
    }
}

TEST(TridiagonalEigen, KnownSpectrum) {
    // Tridiagonal with 2 on the diagonal and -1 off it: 2 - 2 cos(j pi/(n+1)).
    const int n = 12;
    std::vector<double> d(n, 2.0), e(n - 1, -1.0);
    const auto r = symmetric_tridiagonal_eigen(d, e, true);
    for (int j = 1; j <= n; ++j)
        EXPECT_NEAR(r.values[j - 1], 2 - 2 * std::cos(j * pi / (n + 1)), 1e-13);
    double s = 0;
    for (double v : r.first_components) s += v * v;
    EXPECT_NEAR(s, 1.0, 1e-13);
}

TEST(Christoffel, Examples) {
    const auto b = build_basis(2, 200);
    for (double x : {0.0, 0.4, -1.1})
        EXPECT_NEAR(christoffel(b, 0, x), std::exp(2 * pi * x * x) / std::sqrt(2.0),
                    1e-14 * christoffel(b, 0, x));
    const auto h = oracle::hermite_h(0.0L, 8);
    long double s = 0;
    for (auto v : h) s += v * v;
    EXPECT_NEAR(christoffel(b, 8, 0.0), double(1 / s), 1e-14);
    EXPECT_THROW(christoffel(b, 201, 0.0), Error);
}

TEST(Christoffel, EdgeScaling) {
    const auto b = build_basis(2, 128);
    double lo = 1e300, hi = 0;
    for (int n : {16, 32, 64, 128}) {
        const double r = christoffel(b, n, mrs_number(2, n)) * std::pow(n, 2.0 / 3.0 - 0.5);
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    EXPECT_LT(hi / lo, 1.5);
}

TEST(Integrate, Examples) {
    const auto b = build_basis(2, 22);
    const auto r = gauss_rule(b, 21);
    EXPECT_NEAR(integrate(r, [&](double x) { return b.eval(x, 0)[0]; }), 0.8408964152537145, 1e-14);
    EXPECT_NEAR(integrate(r, [&](double x) { return b.eval(x, 5)[5]; }), 0.0, 1e-10);
    const double one = integrate(r, [](double) { return 1.0; });
    EXPECT_LE(one, 1.0);
    EXPECT_GE(one, 1 - 1e-6);
}

TEST(Integrate, ReportsFailingNode) {
    const auto b = build_basis(2, 8);
    const auto r = gauss_rule(b, 5);
    try {
        integrate(r, [&](double x) -> double {
            if (x > 0.1) throw std::runtime_error("boom");
            return 1.0;
        });
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::evaluator_failure);
        EXPECT_EQ(e.index().value(), 3);
    }
    try {
        integrate(r, [](double x) { return x == 0.0 ? std::nan("") : 1.0; });
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.index().value(), 2);
    }
}

} // namespace
