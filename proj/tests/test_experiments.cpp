#include "freudq/experiments.hpp"
#include "freudq/io.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

using namespace freudq;

namespace {

TEST(FigureSpec, Defaults) {
    const auto f1 = FigureSpec::defaults(FigureId::fig1a);
    EXPECT_EQ(f1.n_values.front(), 3);
    EXPECT_EQ(f1.n_values.back(), 41);
    EXPECT_EQ(f1.n_values.size(), 20u);
    EXPECT_DOUBLE_EQ(f1.t, 1.25);
    EXPECT_NEAR(f1.theory_slope(), -0.19382, 1e-5);
    EXPECT_DOUBLE_EQ(FigureSpec::defaults(FigureId::fig1b).t, 50.0 / 49.0);
    EXPECT_NEAR(FigureSpec::defaults(FigureId::fig2a).theory_slope(), -0.3465, 1e-4);
    EXPECT_NEAR(FigureSpec::defaults(FigureId::fig2b).theory_slope(), -0.1733, 1e-4);
    EXPECT_EQ(FigureSpec::defaults(FigureId::fig3b).axis(), Axis::log10_n);
    EXPECT_EQ(FigureSpec::defaults(FigureId::fig3a).axis(), Axis::sqrt_n);
    EXPECT_EQ(parse_figure_id("fig3c"), FigureId::fig3c);
    EXPECT_FALSE(parse_figure_id("fig4"));
}

TEST(RunFigure, Fig1aSlope) {
    const auto t = run_figure(FigureSpec::defaults(FigureId::fig1a));
    EXPECT_NEAR(t.slope, -0.35, 0.05);
    EXPECT_EQ(t.rows.size(), 20u);
}

TEST(RunFigure, DeterministicAcrossThreadCounts) {
    auto spec = FigureSpec::defaults(FigureId::fig3a);
    spec.sign_mode = SignMode::random;
    spec.eps = 0.02;
    setenv("FREUDQ_THREADS", "1", 1);
    std::ostringstream a, b;
    write_wce_csv(a, run_figure(spec));
    setenv("FREUDQ_THREADS", "4", 1);
    write_wce_csv(b, run_figure(spec));
    unsetenv("FREUDQ_THREADS");
    EXPECT_EQ(a.str(), b.str());
}

TEST(RunFigure, FailedRowsAreRecorded) {
    auto spec = FigureSpec::defaults(FigureId::fig3b);
    spec.sign_mode = SignMode::random;
    spec.eps = 0.2;
    spec.n_values = {3, 5, 21};
    const auto t = run_figure(spec);
    ASSERT_EQ(t.rows.size(), 3u);
    EXPECT_TRUE(t.rows[2].failed);
    EXPECT_NE(t.rows[2].error.find("gap-violation"), std::string::npos);
}

TEST(RunFigure, Validation) {
    auto spec = FigureSpec::defaults(FigureId::fig1a);
    spec.t = 1.0;
    EXPECT_THROW(run_figure(spec), Error);
    spec = FigureSpec::defaults(FigureId::fig2a);
    spec.n_values.clear();
    EXPECT_THROW(run_figure(spec), Error);
}

TEST(RunFigureProperty, BelowTheoryLine) {
    for (auto id : {FigureId::fig1a, FigureId::fig1b, FigureId::fig2a, FigureId::fig2b}) {
        const auto t = run_figure(FigureSpec::defaults(id));
        const auto& first = t.rows.front();
        const double x0 = axis_value(t.axis, first.n);
        for (const auto& r : t.rows) {
            ASSERT_FALSE(r.failed);
            const double line = std::log10(first.wce) + t.theory_slope * (axis_value(t.axis, r.n) - x0);
            EXPECT_LE(std::log10(r.wce), line + 1e-12) << to_string(id) << " n=" << r.n;
        }
    }
}

TEST(ParallelFor, CoversAllIndices) {
    setenv("FREUDQ_THREADS", "3", 1);
    std::vector<int> hit(100, 0);
    parallel_for(hit.size(), [&](std::size_t i) { hit[i] += 1; });
    unsetenv("FREUDQ_THREADS");
    for (int h : hit) EXPECT_EQ(h, 1);
}

} // namespace
