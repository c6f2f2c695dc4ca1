#include "planar/series_json.hpp"

#include "bridge.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace planar;

TEST(Json, RationalRoundTrip) {
    std::mt19937 rng(41);
    for (int i = 0; i < 10; ++i) {
        const auto f = bridge::random_series(rng, 5, 3);
        const auto j = to_json(f);
        EXPECT_EQ(j.at("scalar"), "rational");
        EXPECT_EQ(series_from_json<Rational>(Json::parse(j.dump())), f);
    }
}

TEST(Json, ComplexRoundTripIsBitExact) {
    std::vector<ComplexSeries::Term> terms{{parse("1"), Complex(0.1, -1e-300)},
                                           {parse("(x,(x,x))"), Complex(1.0 / 3.0, 2e-17)}};
    const auto f = ComplexSeries::from_terms(4, std::move(terms));
    EXPECT_EQ(series_from_json<Complex>(Json::parse(to_json(f).dump())), f);
}

TEST(Json, Layout) {
    const auto f = RationalSeries::from_terms(2, {{parse("(x,x)"), Rational(-3, 4)}, {parse("1"), Rational(2)}});
    const auto j = to_json(f);
    EXPECT_EQ(j.dump(), R"J({"trunc":2,"scalar":"rational","terms":[{"tree":"1","value":"2"},{"tree":"(x,x)","value":"-3/4"}]})J");
}

TEST(Json, GermRoundTrip) {
    const RationalGerm g{Rational(5, 3), RationalSeries::affine(Rational(1), 3)};
    const auto back = germ_from_json<Rational>(Json::parse(to_json(g).dump()));
    EXPECT_EQ(back.base, g.base);
    EXPECT_EQ(back.series, g.series);
    const ComplexGerm c{Complex(1.0, 2.0), ComplexSeries::unit(2)};
    const auto cback = germ_from_json<Complex>(to_json(c));
    EXPECT_EQ(cback.base, c.base);
}

TEST(Json, Errors) {
    auto bad = [](const char* text) { return Json::parse(text); };
    EXPECT_THROW(series_from_json<Rational>(bad(R"J({"trunc":2,"terms":[]})J")), std::invalid_argument);
    EXPECT_THROW(series_from_json<Rational>(bad(R"J({"trunc":2,"scalar":"real","terms":[]})J")), std::invalid_argument);
    EXPECT_THROW(series_from_json<Complex>(bad(R"J({"trunc":2,"scalar":"rational","terms":[]})J")), std::invalid_argument);
    EXPECT_THROW(series_from_json<Rational>(bad(R"J({"trunc":-1,"scalar":"rational","terms":[]})J")), std::invalid_argument);
    EXPECT_THROW(series_from_json<Rational>(bad(R"J({"trunc":1,"scalar":"rational","terms":[{"tree":"(x,x)","value":"1"}]})J")),
                 std::invalid_argument);
    EXPECT_THROW(series_from_json<Rational>(
                     bad(R"J({"trunc":2,"scalar":"rational","terms":[{"tree":"x","value":"1"},{"tree":"x","value":"2"}]})J")),
                 std::invalid_argument);
    EXPECT_THROW(series_from_json<Rational>(bad(R"J({"trunc":2,"scalar":"rational","terms":[{"tree":"x","value":1}]})J")),
                 std::invalid_argument);
    EXPECT_THROW(series_from_json<Complex>(bad(R"J({"trunc":2,"scalar":"complex","terms":[{"tree":"x","re":1}]})J")),
                 std::invalid_argument);
    EXPECT_THROW(series_from_json<Rational>(bad(R"J({"trunc":2,"scalar":"rational","terms":[{"tree":"(x","value":"1"}]})J")),
                 std::invalid_argument);
    EXPECT_THROW(germ_from_json<Rational>(bad(R"J({"trunc":2,"scalar":"rational","terms":[]})J")), std::invalid_argument);
}
