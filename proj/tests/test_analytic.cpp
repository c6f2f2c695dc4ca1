#include "planar/analytic.hpp"
#include "planar/expfam.hpp"

#include "bridge.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace planar;

TEST(Reciprocal, GermIsSignedCombSeries) {
    const auto f = reciprocal_function<Rational>();
    for (const Rational& a : {Rational(1), Rational(-2), Rational(3, 7), Rational(-5, 2)}) {
        const auto g = f.germ(a, 8);
        EXPECT_EQ(g.series, reciprocal_closed_form(a, 8));
        for (const auto& [t, v] : g.series.terms()) EXPECT_EQ(t, comb(t.degree())) << format(t);
        // Hand check: (-1)^n a^-(n+1).
        Rational want = 1 / a;
        for (int n = 0; n <= 8; ++n) {
            EXPECT_EQ(g.series.coefficient(comb(n)), want);
            want = -want / a;
        }
    }
    EXPECT_EQ(f.germ(Rational(1), 3).series.coefficient(comb(2)), 1);
    EXPECT_THROW(f.germ(Rational(0), 3), std::domain_error);
    EXPECT_THROW(f.germ(Rational(1), -1), std::invalid_argument);
}

TEST(Reciprocal, CoefficientFunctions) {
    const auto f = reciprocal_function<Rational>();
    const std::vector<Rational> samples{Rational(1), Rational(2), Rational(-1, 3)};
    const auto unit = coefficient_function(f, PlanarMonomial::unit(), samples);
    for (std::size_t i = 0; i < samples.size(); ++i) EXPECT_EQ(unit[i], 1 / samples[i]);
    EXPECT_EQ(coefficient_function(f, comb(2), {Rational(2)})[0], Rational(1, 8));
}

TEST(Sqrt, GermSquaresToAffine) {
    const auto f = sqrt_function();
    for (const Complex a : {Complex(1.0), Complex(2.0), Complex(0.3, -1.2), Complex(-4.0, 0.5)}) {
        const auto g = f.germ(a, 7);
        EXPECT_TRUE(mul2(g.series, g.series).equals(ComplexSeries::affine(a, 7), 1e-12));
        EXPECT_LT(std::abs(g.series.coefficient(PlanarMonomial::unit()) - std::sqrt(a)), 1e-15);
    }
    EXPECT_THROW(f.germ(Complex(-1.0), 3), std::domain_error);
    EXPECT_THROW(f.germ(Complex(0.0), 3), std::domain_error);
    EXPECT_TRUE(f.contains(Complex(-1.0, 1e-9)));
}

TEST(Sqrt, GermAtOneIsOneMinusTwoH) {
    const auto g = sqrt_function().germ(Complex(1.0), 8).series;
    const auto want = convert<Complex>(subtract(RationalSeries::unit(8), scale(Rational(2), h_series(8))));
    EXPECT_TRUE(g.equals(want, 1e-14));
    EXPECT_NEAR(g.coefficient(parse("x")).real(), 0.5, 1e-15);
}

TEST(Sqrt, MajorantsWithoutMaterializing) {
    for (const Complex a : {Complex(1.0), Complex(2.5), Complex(0.5, 0.5)}) {
        const auto m = sqrt_germ_majorants(a, 10);
        const auto direct = majorants(sqrt_function().germ(a, 10).series);
        for (std::size_t n = 0; n < m.size(); ++n) EXPECT_NEAR(m[n], direct[n], 1e-12 * direct[n]) << n;
    }
}

TEST(Sqrt, CoefficientFunctionIsRoot) {
    const std::vector<Complex> samples{Complex(1.0), Complex(4.0), Complex(9.0)};
    const auto v = coefficient_function(sqrt_function(), PlanarMonomial::unit(), samples);
    for (std::size_t i = 0; i < v.size(); ++i) EXPECT_NEAR(v[i].real(), std::sqrt(samples[i].real()), 1e-15);
}

// Left inverses of the germs of a planar analytic function form one again.
TEST(LeftInverseFamily, InverseSqrtIsCompatible) {
    const auto inv = left_inverse_family(sqrt_function());
    for (double a : {1.0, 2.0, 4.0}) {
        const auto g = inv.germ(Complex(a), 6);
        EXPECT_TRUE(mul2(g.series, sqrt_function().germ(Complex(a), 6).series).equals(ComplexSeries::unit(6), 1e-12));
        EXPECT_NEAR(g.series.coefficient(PlanarMonomial::unit()).real(), 1.0 / std::sqrt(a), 1e-15);
        // A step of a/4 is inside the radius a, but planar trees outnumber the
        // geometric decay; the discrepancy shrinks with the source degree.
        const auto coarse = check_compatibility(inv, Complex(a), Complex(1.25 * a), 4, 1.0, 10);
        const auto fine = check_compatibility(inv, Complex(a), Complex(1.25 * a), 4, 2e-4, 12);
        EXPECT_TRUE(fine.passed) << "a=" << a << " discrepancy " << fine.max_discrepancy;
        EXPECT_LT(fine.max_discrepancy, coarse.max_discrepancy / 5.0) << "a=" << a;
    }
}

TEST(EntireSeries, GermAtZeroIsTruncation) {
    const auto f = convert<Complex>(exp_series(2, 10));
    const auto F = from_entire_series(f, 1e9, "exp2");
    EXPECT_TRUE(F.germ(Complex(0.0), 5).series.equals(f.truncated(5), 0.0));
    EXPECT_THROW(F.germ(Complex(0.1), 11), std::invalid_argument);
    EXPECT_EQ(F.name(), "exp2");
}

TEST(EntireSeries, ExpGermIsScaledExp) {
    const auto F = from_entire_series(convert<Complex>(exp_series(2, 14)), 1e9);
    const auto g = F.germ(Complex(0.5), 5).series;
    EXPECT_TRUE(g.equals(scale(Complex(std::exp(0.5)), convert<Complex>(exp_series(2, 5))), 1e-7));
}

TEST(EntireSeries, TwoStepExpAgreesWithOneStep) {
    const auto f = convert<Complex>(exp_series(2, 10));
    const auto at_02 = rebase_series(f, Complex(0.2), 10).germ;
    const auto two_step = rebase_between(at_02, Complex(0.5), 6).germ.series;
    const auto direct = rebase_series(f, Complex(0.5), 6).germ.series;
    EXPECT_TRUE(two_step.equals(direct, 1e-12));
}

TEST(EntireSeries, PolynomialGermsAreExactlyCompatible) {
    std::mt19937 rng(31);
    const auto p = bridge::random_series(rng, 5, 4).as_polynomial();
    const auto F = from_entire_series(p, 1e9);
    for (int i = 0; i < 5; ++i) {
        const Rational a = bridge::random_rational(rng), b = bridge::random_rational(rng);
        const auto r = check_compatibility(F, a, b, 5, 0.0);
        EXPECT_TRUE(r.passed);
        EXPECT_EQ(r.max_discrepancy, 0.0);
    }
}

TEST(Compatibility, SamePointIsExact) {
    const auto r = check_compatibility(sqrt_function(), Complex(2.0), Complex(2.0), 5, 0.0);
    EXPECT_TRUE(r.passed);
    EXPECT_THROW(check_compatibility(sqrt_function(), Complex(2.0), Complex(2.5), 5, 1e-6, 4), std::invalid_argument);
}

TEST(RadiusHint, Values) {
    EXPECT_EQ(sqrt_function().radius_hint(Complex(4.0)), 4.0);
    EXPECT_EQ(reciprocal_function<Complex>().radius_hint(Complex(0.0)), std::nullopt);
    EXPECT_EQ(from_entire_series(RationalSeries::unit(3), 2.0).radius_hint(Rational(1, 2)), 1.5);
}
