#include "planar/analytic.hpp"
#include "planar/expfam.hpp"
#include "planar/radius.hpp"
#include "planar/special.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

using namespace planar;

TEST(Radius, GeometricSequenceIsExact) {
    std::vector<double> m;
    for (int n = 0; n <= 12; ++n) m.push_back(std::pow(0.5, -n) * 3.0);  // radius 0.5
    const auto e = estimate_radius(m);
    EXPECT_FALSE(e.infinite);
    EXPECT_NEAR(e.estimate, 0.5, 1e-12);
    EXPECT_NEAR(e.residual, 0.0, 1e-12);
    EXPECT_EQ(e.method, "root-fit");
    EXPECT_EQ(e.window_end, 12);
    EXPECT_EQ(e.window_begin, 8);  // last ceil(13/3) = 5 degrees
}

TEST(Radius, CatalanSeries) {
    const auto e = estimate_radius(g_series_majorants(16));
    EXPECT_GE(e.estimate, 0.20);
    EXPECT_LE(e.estimate, 0.30);
}

TEST(Radius, ExponentialIsInfinite) {
    const auto e = estimate_radius(exp_majorants(2, 16));
    EXPECT_TRUE(e.infinite);
    EXPECT_TRUE(std::isinf(e.estimate));
    // Factorial decay: M_16^(1/16) ~ 0.17 does not reach the 0.01 cutoff, so
    // the growth of the root-test radii decides.
    EXPECT_EQ(e.method, "root-growth");
}

TEST(Radius, SqrtGermAtOne) {
    const auto e = estimate_radius(sqrt_germ_majorants(Complex(1.0), 16));
    EXPECT_GE(e.estimate, 0.85);
    EXPECT_LE(e.estimate, 1.15);
}

TEST(Radius, ZetaGermAtThree) {
    for (int n : {12, 16}) {
        const auto e = estimate_radius(zeta_germ_majorants({Complex(3.0), 2, n}));
        EXPECT_GE(e.estimate, 1.7) << n;
        EXPECT_LE(e.estimate, 2.3) << n;
    }
}

TEST(Radius, PolynomialTail) {
    std::vector<double> m(12, 0.0);
    m[0] = 1.0;
    m[3] = 2.0;
    const auto e = estimate_radius(m);
    EXPECT_TRUE(e.infinite);
    EXPECT_EQ(e.method, "polynomial");
}

TEST(Radius, RootCutoff) {
    std::vector<double> m;
    for (int n = 0; n <= 10; ++n) m.push_back(std::pow(1e-3, n));
    const auto e = estimate_radius(m);
    EXPECT_TRUE(e.infinite);
    EXPECT_EQ(e.method, "root-cutoff");
}

TEST(Radius, Errors) {
    EXPECT_THROW(estimate_radius(std::vector<double>(8, 1.0)), std::invalid_argument);
    std::vector<double> neg(10, 1.0);
    neg[4] = -1.0;
    EXPECT_THROW(estimate_radius(neg), std::invalid_argument);
    std::vector<double> inf(10, 1.0);
    inf[9] = std::numeric_limits<double>::infinity();
    EXPECT_THROW(estimate_radius(inf), std::invalid_argument);
    std::vector<double> lone(10, 0.0);
    lone[9] = 1.0;
    EXPECT_THROW(estimate_radius(lone), std::invalid_argument);
}

TEST(Radius, ScaleEquivariance) {
    // Majorants of f(lambda x) are lambda^n M_n.
    const auto base = g_series_majorants(16);
    const auto e = estimate_radius(base);
    for (double lambda : {2.0, 1.0 / 3.0}) {
        auto scaled = base;
        for (std::size_t n = 0; n < scaled.size(); ++n) scaled[n] *= std::pow(lambda, static_cast<double>(n));
        const auto s = estimate_radius(scaled);
        EXPECT_NEAR(s.estimate, e.estimate / lambda, 1e-9 * e.estimate / lambda);
        EXPECT_NEAR(s.residual, e.residual, 1e-9);
    }
}

TEST(Radius, DominationOrdersEstimates) {
    // Dominating sequences: g plus 6^n, and the sqrt majorants inflated by 1 + n^2/10.
    const auto small = g_series_majorants(16);
    std::vector<double> big;
    for (std::size_t n = 0; n < small.size(); ++n) big.push_back(small[n] + std::pow(6.0, static_cast<double>(n)));
    EXPECT_LE(estimate_radius(big).estimate, estimate_radius(small).estimate);

    const auto a = sqrt_germ_majorants(Complex(1.0), 16);
    auto b = a;
    for (std::size_t n = 0; n < b.size(); ++n) b[n] = a[n] * (1.0 + 0.1 * static_cast<double>(n) * n);
    EXPECT_LE(estimate_radius(b).estimate, estimate_radius(a).estimate);
}
