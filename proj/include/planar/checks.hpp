#pragma once

// Identity-check suites run by `planar check <suite>`. Each suite evaluates
// library results against independent formulas and reports one line per item.

#include "planar/analytic.hpp"
#include "planar/expfam.hpp"
#include "planar/profile.hpp"
#include "planar/radius.hpp"
#include "planar/rebase.hpp"
#include "planar/series.hpp"
#include "planar/special.hpp"
#include "planar/tree.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/polygamma.hpp>

#include <chrono>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace planar {

struct CheckOptions {
    int max_degree = 6;         // composition and path suites
    int random_pairs = 100;     // composition suite
    int random_series = 50;     // path and inverse suites
    std::uint32_t seed = 20240;
};

struct CheckResult {
    std::string name;
    bool passed = true;
    std::vector<std::string> details;
    double seconds = 0.0;

    void expect(bool ok, const std::string& what) {
        details.push_back(std::string(ok ? "ok    " : "FAIL  ") + what);
        passed = passed && ok;
    }
    void note(const std::string& what) { details.push_back("info  " + what); }
};

namespace detail {

inline std::string fmt(const char* pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, v);
    return buf;
}

inline Rational random_rational(std::mt19937& rng, int span = 9) {
    std::uniform_int_distribution<int> num(-span, span), den(1, span);
    Rational r(num(rng), den(rng));
    r.canonicalize();
    return r;
}

inline Rational random_nonzero_rational(std::mt19937& rng, int span = 9) {
    for (;;) {
        Rational r = random_rational(rng, span);
        if (sgn(r) != 0) return r;
    }
}

// A polynomial with a handful of random terms of degree <= n and a nonzero constant.
inline RationalSeries random_rational_series(std::mt19937& rng, int n, int terms, bool polynomial) {
    auto index = TreeIndex::get(n);
    std::uniform_int_distribution<int> pick(1, index->size() - 1);
    std::vector<RationalSeries::Term> out{{PlanarMonomial::unit(), random_nonzero_rational(rng)}};
    for (int i = 0; i < terms; ++i) out.emplace_back(index->tree(pick(rng)), random_rational(rng));
    return RationalSeries::from_terms(n, std::move(out), polynomial);
}

inline double max_abs(const ComplexSeries& f) {
    double worst = 0.0;
    for (const auto& [t, v] : f.terms()) worst = std::max(worst, std::abs(v));
    return worst;
}

}  // namespace detail

inline CheckResult check_example(const CheckOptions& = {}) {
    CheckResult r;
    r.name = "example";
    const auto t = parse("(x,(x,x))");
    const std::vector<std::pair<std::string, std::uint64_t>> binoms{
        {"(x,(x,(x,x)))", 4}, {"(x,((x,x),x))", 3}, {"((x,x),(x,x))", 2}, {"((x,(x,x)),x)", 1}, {"(((x,x),x),x)", 0}};
    for (const auto& [u, want] : binoms) {
        r.expect(binom(parse(u), t) == want, "(" + u + " / (x,(x,x))) = " + std::to_string(want));
    }
    for (const auto& u : enumerate_binary(4)) {
        const Rational want = format(u) == "((x,x),(x,x))" ? Rational(1, 56) : Rational(1, 168);
        r.expect(exp_coeff(u, 2) == want, "A_" + format(u) + "(2) = " + want.get_str());
    }
    r.expect(exp_coeff(t, 2) == Rational(1, 12), "alpha_(x,(x,x)) = 1/12");
    r.expect(corollary43_check(t, 1, 2), "alpha_T / 1! = 4a1 + 3a2 + 2a3 + a4");
    return r;
}

inline CheckResult check_degree_sums(const CheckOptions& = {}) {
    CheckResult r;
    r.name = "degree-sums";
    for (int k = 2; k <= 4; ++k) {
        auto table = ExpCoefficientTable::get(k);
        Rational factorial(1);
        bool ok = true;
        for (int n = 0; n <= 8; ++n) {
            if (n > 1) factorial *= n;
            Rational sum(0);
            for (const auto& [u, a] : table->layer(n)) sum += a;
            ok = ok && sum == 1 / factorial && exp_degree_sums(k, n).back() == sum;
        }
        r.expect(ok, "k=" + std::to_string(k) + ": sum over degree n of A_T = 1/n!, n <= 8");
    }
    return r;
}

inline CheckResult check_catalan(const CheckOptions& = {}) {
    CheckResult r;
    r.name = "catalan";
    constexpr int n = 10;
    const auto g = g_series(n);
    const auto h = h_series(n);
    const auto one = RationalSeries::unit(n);
    const auto x = RationalSeries::monomial(PlanarMonomial::leaf(), Rational(1), n);
    r.expect(mul2(g, g) == subtract(g, x), "g^2 = g - x");
    r.expect(pow(subtract(one, scale(Rational(2), g)), 2) == subtract(one, scale(Rational(4), x)), "(1 - 2g)^2 = 1 - 4x");
    r.expect(pow(subtract(one, scale(Rational(2), h)), 2) == add(one, x), "(1 - 2h)^2 = 1 + x");
    std::vector<Rational> catalan{0, 1};
    for (int m = 2; m <= n; ++m) catalan.push_back(catalan.back() * (2 * (2 * m - 3)) / m);  // Catalan(m - 1)
    r.expect(classical_image(g) == catalan, "classical image of g = Catalan numbers");
    return r;
}

inline CheckResult check_composition(const CheckOptions& opts = {}) {
    CheckResult r;
    r.name = "composition";
    CompositionChecker checker(opts.max_degree);
    const auto& index = checker.index();
    bool counting = true;
    for (int s = 0; s < index.size(); ++s) {
        for (int t = 0; t < index.size(); ++t) counting = counting && checker.counting_identity_holds(s, t);
    }
    r.expect(counting, "counting identity, all S, T of degree <= " + std::to_string(opts.max_degree));

    // Counting sums do not depend on (a, b); evaluate them once.
    struct Case {
        int m, n;
        std::vector<std::uint64_t> c;
        std::uint64_t st;
    };
    std::vector<Case> cases;
    for (int s = 0; s < index.size(); ++s) {
        for (int t = 0; t < index.size(); ++t) {
            if (index.degree(t) > index.degree(s)) continue;
            cases.push_back({index.degree(t), index.degree(s), checker.counting_sums(s, t), checker.binom_indexed(s, t)});
        }
    }
    std::mt19937 rng(opts.seed);
    int failures = 0;
    for (int p = 0; p < opts.random_pairs; ++p) {
        const Rational a = detail::random_rational(rng);
        const Rational b = detail::random_rational(rng);
        const auto pa = power_table(a, opts.max_degree);
        const auto pd = power_table(Rational(b - a), opts.max_degree);
        const auto pb = power_table(b, opts.max_degree);
        for (const auto& cs : cases) {
            Rational lhs(0);
            for (int k = 0; k <= cs.n - cs.m; ++k) {
                if (cs.c[static_cast<std::size_t>(k)] == 0) continue;
                lhs += Rational(static_cast<unsigned long>(cs.c[static_cast<std::size_t>(k)])) *
                       pa[static_cast<std::size_t>(cs.n - cs.m - k)] * pd[static_cast<std::size_t>(k)];
            }
            if (lhs != Rational(static_cast<unsigned long>(cs.st)) * pb[static_cast<std::size_t>(cs.n - cs.m)]) {
                ++failures;
            }
        }
    }
    r.expect(failures == 0, "composition identity, " + std::to_string(cases.size()) + " (S, T) pairs x " +
                                std::to_string(opts.random_pairs) + " random (a, b)");
    return r;
}

inline CheckResult check_paths(const CheckOptions& opts = {}) {
    CheckResult r;
    r.name = "paths";
    std::mt19937 rng(opts.seed + 1);
    const int n = opts.max_degree;
    int path_fail = 0, value_fail = 0, back_fail = 0;
    for (int i = 0; i < opts.random_series; ++i) {
        const auto f = detail::random_rational_series(rng, n, 12, true);
        const Rational a = detail::random_rational(rng);
        const Rational b = detail::random_rational(rng);
        const auto at_a = rebase_polynomial(f, a);
        const auto direct = rebase_polynomial(f, b);
        const auto two_step = rebase_between(at_a, b, n).germ;
        if (!(two_step.series == direct.series)) ++path_fail;
        if (at_a.series.coefficient(PlanarMonomial::unit()) != eval(f, a)) ++value_fail;
        if (!(rebase_between(at_a, Rational(0), n).germ.series == f)) ++back_fail;
    }
    const std::string count = std::to_string(opts.random_series) + " random polynomials of degree <= " + std::to_string(n);
    r.expect(path_fail == 0, "two-step rebase = direct rebase, " + count);
    r.expect(value_fail == 0, "constant term of the germ at a = f(a)");
    r.expect(back_fail == 0, "rebasing back to 0 recovers f");
    return r;
}

inline CheckResult check_translation(const CheckOptions& = {}) {
    CheckResult r;
    r.name = "translation";
    const auto k2 = translation_check(2, Complex(0.3, 0.0), 6, 14, 1e-6);
    r.expect(k2.passed, "k=2, lambda=0.3, N=6, source 14: max error " + detail::fmt("%.3g", k2.max_discrepancy));
    const auto k3 = translation_check(3, Complex(-0.2, 0.0), 5, 12, 1e-6);
    r.expect(k3.passed, "k=3, lambda=-0.2, N=5, source 12: max error " + detail::fmt("%.3g", k3.max_discrepancy));
    return r;
}

inline CheckResult check_inverses(const CheckOptions& opts = {}) {
    CheckResult r;
    r.name = "inverses";
    std::mt19937 rng(opts.seed + 2);
    int left_fail = 0, right_fail = 0;
    constexpr int n = 8;
    const auto one = RationalSeries::unit(n);
    for (int i = 0; i < opts.random_series; ++i) {
        const auto f = detail::random_rational_series(rng, n, 10, false);
        if (!(mul2(left_inverse(f), f) == one)) ++left_fail;
        if (!(mul2(f, right_inverse(f)) == one)) ++right_fail;
    }
    const std::string count = std::to_string(opts.random_series) + " random series, trunc 8";
    r.expect(left_fail == 0, "left_inverse(f) * f = 1, " + count);
    r.expect(right_fail == 0, "f * right_inverse(f) = 1, " + count);
    bool closed = true;
    for (const Rational& a : {Rational(1), Rational(-2), Rational(3, 7), Rational(-5, 2)}) {
        closed = closed && left_inverse(RationalSeries::affine(a, 10)) == reciprocal_closed_form(a, 10);
    }
    r.expect(closed, "reciprocal germ = sum (-1)^n a^-(n+1) comb(n), trunc 10");
    return r;
}

inline CheckResult check_radius(const CheckOptions& = {}) {
    CheckResult r;
    r.name = "radius";
    constexpr int n = 16;
    const auto g = estimate_radius(g_series_majorants(n));
    r.expect(g.estimate >= 0.20 && g.estimate <= 0.30, "g: " + detail::fmt("%.4f", g.estimate) + " in [0.20, 0.30]");
    const auto e = estimate_radius(exp_majorants(2, n));
    r.expect(e.infinite, "exp_2: infinite (" + e.method + ")");
    const auto s = estimate_radius(sqrt_germ_majorants(Complex(1.0), n));
    r.expect(s.estimate >= 0.85 && s.estimate <= 1.15, "sqrt at 1: " + detail::fmt("%.4f", s.estimate) + " in [0.85, 1.15]");
    const auto z = estimate_radius(zeta_germ_majorants({Complex(3.0), 2, n}));
    r.expect(z.estimate >= 1.7 && z.estimate <= 2.3, "zeta at 3: " + detail::fmt("%.4f", z.estimate) + " in [1.7, 2.3]");
    return r;
}

// Gamma^(d)(r) from Gamma^(d+1) = sum_j C(d, j) Gamma^(j) psi_(d-j).
inline std::vector<double> gamma_derivs_by_polygamma(double r, int d_max) {
    std::vector<double> g{boost::math::tgamma(r)};
    for (int d = 0; d < d_max; ++d) {
        double sum = 0.0, choose = 1.0;
        for (int j = 0; j <= d; ++j) {
            sum += choose * g[static_cast<std::size_t>(j)] * boost::math::polygamma(d - j, r);
            choose = choose * (d - j) / (j + 1);
        }
        g.push_back(sum);
    }
    return g;
}

inline CheckResult check_special(const CheckOptions& = {}) {
    CheckResult r;
    r.name = "special";
    const double zeta2 = std::numbers::pi * std::numbers::pi / 6.0;
    const double err = std::abs(zeta_deriv(0, Complex(2.0)) - zeta2);
    r.expect(err <= 1e-10, "S_0(2) = pi^2/6, error " + detail::fmt("%.3g", err));

    double worst = 0.0;
    for (double at : {0.5, 1.5, 2.5}) {
        const auto want = gamma_derivs_by_polygamma(at, 4);
        for (int d = 0; d <= 4; ++d) {
            const double w = want[static_cast<std::size_t>(d)];
            worst = std::max(worst, std::abs(gamma_deriv(d, Complex(at)) - w) / std::abs(w));
        }
    }
    r.expect(worst <= 1e-8, "Gamma^(d) vs polygamma recursion, d <= 4, r in {0.5, 1.5, 2.5}: " + detail::fmt("%.3g", worst));

    const auto direct = zeta_germ({Complex(2.2), 2, 4}).series;
    const auto graded = zeta_continue_graded({Complex(3.0), 2, 4}, Complex(2.2), 4, 40);
    const double cont = detail::max_abs(subtract(graded.germ.series, direct));
    r.expect(cont <= 1e-3, "zeta germ 3 -> 2.2 at trunc 4, source 40: " + detail::fmt("%.3g", cont));
    const auto tree_level = zeta_continue(zeta_germ({Complex(3.0), 2, 12}), Complex(2.2), 4);
    r.note("same step by tree-level rebase, source 12: " +
           detail::fmt("%.3g", detail::max_abs(subtract(tree_level.germ.series, direct))));
    return r;
}

inline CheckResult check_gamma_probe(const CheckOptions& = {}) {
    CheckResult r;
    r.name = "gamma-probe";
    const auto probe = gamma_shift_probe(Complex(1.5), 3, 2);
    double low = 0.0;
    for (const auto& e : probe.entries) {
        if (e.tree.degree() <= 2) low = std::max(low, e.abs_diff / std::max(1.0, std::abs(e.shifted)));
    }
    r.expect(low <= 1e-8, "Gamma(s+1) and s Gamma(s) agree through degree 2: " + detail::fmt("%.3g", low));
    for (const char* tree : {"(x,(x,x))", "((x,x),x)"}) {
        const auto* e = probe.find(parse(tree));
        const double rel = e ? e->rel_diff : 0.0;
        r.expect(rel > 1e-3, std::string("differ at ") + tree + ": relative " + detail::fmt("%.3g", rel));
    }
    return r;
}

struct Suite {
    const char* name;
    std::function<CheckResult(const CheckOptions&)> run;
};

inline const std::vector<Suite>& check_suites() {
    static const std::vector<Suite> suites{
        {"example", check_example},         {"degree-sums", check_degree_sums}, {"catalan", check_catalan},
        {"composition", check_composition}, {"paths", check_paths},             {"translation", check_translation},
        {"inverses", check_inverses},       {"radius", check_radius},           {"special", check_special},
        {"gamma-probe", check_gamma_probe},
    };
    return suites;
}

inline CheckResult run_check(const std::string& name, const CheckOptions& opts = {}) {
    for (const auto& s : check_suites()) {
        if (name == s.name) {
            const auto start = std::chrono::steady_clock::now();
            CheckResult r = s.run(opts);
            r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            return r;
        }
    }
    throw std::invalid_argument("unknown check suite '" + name + "'");
}

}  // namespace planar
