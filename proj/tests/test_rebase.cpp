#include "planar/analytic.hpp"
#include "planar/rebase.hpp"

#include "bridge.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace planar;

TEST(Rebase, PolynomialMatchesSubsetOracle) {
    std::mt19937 rng(21);
    for (int i = 0; i < 15; ++i) {
        const auto f = bridge::random_series(rng, 6, 3).as_polynomial();
        const Rational a = bridge::random_rational(rng);
        const auto g = rebase_polynomial(f, a);
        EXPECT_EQ(g.base, a);
        EXPECT_EQ(bridge::to_poly(g.series), oracle::rebase(bridge::to_poly(f), a, 6));
    }
}

TEST(Rebase, TruncatedTargetMatchesOracle) {
    // Wide, high-arity sources exercise the shared-prefix folding.
    std::mt19937 rng(22);
    for (int i = 0; i < 6; ++i) {
        const auto f = bridge::random_series(rng, 7, 25);
        const Rational a = bridge::random_rational(rng);
        const auto r = rebase_series(f, a, 4);
        EXPECT_EQ(bridge::to_poly(r.germ.series), oracle::rebase(bridge::to_poly(f), a, 4));
    }
}

TEST(Rebase, EveryTreeOfDegreeSix) {
    std::vector<RationalSeries::Term> terms;
    int i = 0;
    for (const auto& t : enumerate_upto(6, 6)) terms.emplace_back(t, Rational(++i % 7 - 3, 5));
    const auto f = RationalSeries::from_terms(6, std::move(terms));
    const Rational a(-3, 4);
    EXPECT_EQ(bridge::to_poly(rebase_series(f, a, 6).germ.series), oracle::rebase(bridge::to_poly(f), a, 6));
}

TEST(Rebase, ConstantTermIsEvaluation) {
    std::mt19937 rng(23);
    for (int i = 0; i < 20; ++i) {
        const auto f = bridge::random_series(rng, 6, 3).as_polynomial();
        const Rational a = bridge::random_rational(rng);
        EXPECT_EQ(rebase_polynomial(f, a).series.coefficient(PlanarMonomial::unit()), eval(f, a));
    }
}

TEST(Rebase, PathIndependence) {
    std::mt19937 rng(24);
    for (int i = 0; i < 20; ++i) {
        const auto f = bridge::random_series(rng, 6, 3).as_polynomial();
        const Rational a = bridge::random_rational(rng), b = bridge::random_rational(rng);
        const auto at_a = rebase_polynomial(f, a);
        const auto via_a = rebase_between(at_a, Rational(a + b), 6).germ;
        const auto direct = rebase_polynomial(f, Rational(a + b));
        EXPECT_EQ(via_a.series, direct.series);
        EXPECT_EQ(via_a.base, direct.base);
        EXPECT_EQ(rebase_between(at_a, Rational(0), 6).germ.series.as_polynomial(false), f.as_polynomial(false));
    }
}

TEST(Rebase, ZeroShiftIsIdentity) {
    std::mt19937 rng(25);
    const auto f = bridge::random_series(rng, 6, 4);
    EXPECT_EQ(rebase_series(f, Rational(0), 6).germ.series, f);
}

TEST(Rebase, ComplexAgreesWithRational) {
    std::mt19937 rng(26);
    const auto f = bridge::random_series(rng, 6, 4);
    const Rational a(2, 7);
    const auto exact = convert<Complex>(rebase_series(f, a, 5).germ.series);
    const auto approx = rebase_series(convert<Complex>(f), Complex(a.get_d()), 5).germ.series;
    EXPECT_TRUE(approx.equals(exact, 1e-12));
}

TEST(Rebase, ArgumentChecks) {
    const auto f = RationalSeries::unit(4);
    EXPECT_THROW(rebase_series(f, Rational(1), 5), std::invalid_argument);
    EXPECT_THROW(rebase_series(f, Rational(1), 3, 6), std::invalid_argument);
    EXPECT_THROW(rebase_series(f, Rational(1), -1), std::invalid_argument);
}

TEST(Rebase, LastDegreeContribution) {
    // f = x + (x,x): the degree-2 term sends (x,x) -> 1, 2a x -> x, a^2 -> 1.
    const auto f = RationalSeries::from_terms(2, {{parse("x"), 1}, {parse("(x,x)"), 1}});
    const auto r = rebase_series(f, Rational(3), 2);
    EXPECT_EQ(r.diagnostics.source_degree, 2);
    EXPECT_DOUBLE_EQ(r.diagnostics.last_degree_contribution, 9.0);
    EXPECT_FALSE(r.diagnostics.tail_bound.has_value());
}

TEST(Rebase, TailBound) {
    const auto f = convert<Complex>(g_series(4));
    const std::vector<double> tail{2.0};  // M_5
    const auto r = rebase_series(f, Complex(0.5), 2, std::nullopt, tail);
    ASSERT_TRUE(r.diagnostics.tail_bound.has_value());
    // max over m of 2 C(5, m) 0.5^(5-m): m = 2 gives 2 * 10 / 8
    EXPECT_NEAR(*r.diagnostics.tail_bound, 2.5, 1e-15);
}

TEST(Composition, CountingIdentity) {
    CompositionChecker checker(5);
    for (int s = 0; s < checker.index().size(); ++s) {
        for (int t = 0; t < checker.index().size(); ++t) EXPECT_TRUE(checker.counting_identity_holds(s, t));
    }
}

TEST(Composition, RandomBasePoints) {
    std::mt19937 rng(27);
    CompositionChecker checker(4);
    for (int i = 0; i < 20; ++i) {
        const Rational a = bridge::random_rational(rng), b = bridge::random_rational(rng);
        for (int s = 0; s < checker.index().size(); ++s) {
            for (int t = 0; t < checker.index().size(); ++t) {
                ASSERT_TRUE(checker.composition_identity_holds(s, t, a, b));
            }
        }
    }
    EXPECT_TRUE(check_composition_identity(parse("((x,x),x,(x,x))"), parse("(x,x)"), Rational(1, 3), Rational(-2)));
}

// Reciprocal germ at 1 moved to 1.25 and compared with the germ at 1.25. The
// neglected source terms of degree n contribute C(n, 6) 0.25^(n-6) to the
// degree-6 comb, so source 16 leaves ~2e-3 while source 30 is below 1e-8.
TEST(Compatibility, ReciprocalNeedsLongSource) {
    const auto f = reciprocal_function<Complex>();
    const auto short_source = check_compatibility(f, Complex(1.0), Complex(1.25), 6, 1e-8, 16);
    EXPECT_FALSE(short_source.passed);
    double predicted = 0.0;
    for (int n = 17; n < 200; ++n) predicted += oracle::classical_binomial(n, 6) * std::pow(0.25, n - 6);
    EXPECT_GT(short_source.max_discrepancy, 1e-3);
    EXPECT_LT(short_source.max_discrepancy, predicted);
    const auto long_source = check_compatibility(f, Complex(1.0), Complex(1.25), 6, 1e-8, 30);
    EXPECT_TRUE(long_source.passed) << long_source.max_discrepancy;
}

TEST(Compatibility, SqrtStepInsideRadius) {
    const auto r = check_compatibility(sqrt_function(), Complex(1.0), Complex(0.8), 5, 1e-5, 12);
    EXPECT_TRUE(r.passed) << r.max_discrepancy;
}
