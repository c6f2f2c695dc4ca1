#pragma once

// Conversions between library series and the oracle's string-keyed maps, and
// random inputs for property tests.

#include "planar/series.hpp"

#include "oracles.hpp"

#include <random>
#include <string>
#include <vector>

namespace bridge {

inline oracle::Poly to_poly(const planar::RationalSeries& f) {
    oracle::Poly out;
    for (const auto& [t, v] : f.terms()) out[planar::format(t)] = v;
    return out;
}

inline planar::RationalSeries from_poly(const oracle::Poly& p, int trunc) {
    std::vector<planar::RationalSeries::Term> terms;
    for (const auto& [t, v] : p) terms.emplace_back(planar::parse(t), v);
    return planar::RationalSeries::from_terms(trunc, std::move(terms));
}

inline planar::Rational random_rational(std::mt19937& rng, int span = 9) {
    std::uniform_int_distribution<int> num(-span, span), den(1, span);
    planar::Rational r(num(rng), den(rng));
    r.canonicalize();
    return r;
}

// A few terms per degree drawn from all trees of that degree (every arity).
inline planar::RationalSeries random_series(std::mt19937& rng, int trunc, int per_degree, bool nonzero_constant = false) {
    std::vector<planar::RationalSeries::Term> terms;
    for (int d = 0; d <= trunc; ++d) {
        const auto trees = planar::enumerate(d);
        std::uniform_int_distribution<std::size_t> pick(0, trees.size() - 1);
        for (int i = 0; i < per_degree; ++i) terms.emplace_back(trees[pick(rng)], random_rational(rng));
    }
    if (nonzero_constant) {
        planar::Rational c = random_rational(rng);
        if (c == 0) c = 1;
        terms.emplace_back(planar::PlanarMonomial::unit(), c);
    }
    auto f = planar::RationalSeries::from_terms(trunc, std::move(terms));
    if (nonzero_constant && f.coefficient(planar::PlanarMonomial::unit()) == 0) {
        f = planar::add(f, planar::RationalSeries::unit(trunc));
    }
    return f;
}

}  // namespace bridge
