#pragma once

// Planar analytic functions: a domain plus a germ at every point of it.
// Compatibility of the germs (the expansion of f_a around b equals f_b) is
// checked numerically rather than assumed.

#include "planar/rebase.hpp"
#include "planar/scalar.hpp"
#include "planar/series.hpp"
#include "planar/tree.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace planar {

template <typename S>
class PlanarAnalyticFunction {
public:
    using Domain = std::function<bool(const S&)>;
    using Generator = std::function<Germ<S>(const S&, int)>;
    using RadiusHint = std::function<std::optional<double>(const S&)>;

    PlanarAnalyticFunction(std::string name, Domain domain, Generator generator, RadiusHint hint = nullptr)
        : name_(std::move(name)), domain_(std::move(domain)), generator_(std::move(generator)), hint_(std::move(hint)) {}

    const std::string& name() const { return name_; }
    bool contains(const S& a) const { return domain_(a); }

    // Germ at a, truncated at degree n.
    Germ<S> germ(const S& a, int n) const {
        if (n < 0) throw std::invalid_argument(name_ + ": negative truncation");
        if (!contains(a)) throw std::domain_error(name_ + ": point outside the domain");
        return generator_(a, n);
    }

    // Advisory lower estimate of the radius of the germ at a.
    std::optional<double> radius_hint(const S& a) const {
        if (!hint_ || !contains(a)) return std::nullopt;
        return hint_(a);
    }

private:
    std::string name_;
    Domain domain_;
    Generator generator_;
    RadiusHint hint_;
};

// (x^-1): the germ at a is the left inverse of a + (x - a).
template <typename S = Complex>
PlanarAnalyticFunction<S> reciprocal_function() {
    return PlanarAnalyticFunction<S>(
        "reciprocal", [](const S& a) { return !ScalarTraits<S>::is_zero(a); },
        [](const S& a, int n) { return Germ<S>{a, left_inverse(TruncatedPlanarSeries<S>::affine(a, n))}; },
        [](const S& a) { return std::optional<double>(ScalarTraits<S>::abs(a)); });
}

// Sum_n (-1)^n a^-(n+1) (x - a)^comb(n): the reciprocal germ written out.
template <typename S>
TruncatedPlanarSeries<S> reciprocal_closed_form(const S& a, int n) {
    if (ScalarTraits<S>::is_zero(a)) throw std::domain_error("reciprocal_closed_form: a = 0");
    const S inv = ScalarTraits<S>::one() / a;
    std::vector<typename TruncatedPlanarSeries<S>::Term> terms;
    S c = inv;
    for (int j = 0; j <= n; ++j) {
        terms.emplace_back(comb(j), c);
        c = -(c * inv);
    }
    return TruncatedPlanarSeries<S>::from_terms(n, std::move(terms));
}

// Principal square root; the domain excludes the closed negative real axis.
inline bool sqrt_domain(const Complex& a) { return !(a.imag() == 0.0 && a.real() <= 0.0); }

inline PlanarAnalyticFunction<Complex> sqrt_function() {
    return PlanarAnalyticFunction<Complex>(
        "sqrt", sqrt_domain,
        [](const Complex& a, int n) {
            return ComplexGerm{a, sqrt_solve(ComplexSeries::affine(a, n), std::sqrt(a))};
        },
        [](const Complex& a) { return std::optional<double>(std::abs(a)); });
}

// Degree majorants of the sqrt germ at a without building it. The germ is
// sqrt(a) (1 - 2 h(y / a)), so every binary tree of degree n >= 1 carries
// -2 sqrt(a) (-1/(4a))^n and M_n = Catalan(n-1) * 2 |sqrt a| (4|a|)^-n.
inline std::vector<double> sqrt_germ_majorants(const Complex& a, int n) {
    if (!sqrt_domain(a)) throw std::domain_error("sqrt_germ_majorants: point outside the domain");
    const double root = std::sqrt(std::abs(a));
    const double step = 1.0 / (4.0 * std::abs(a));
    std::vector<double> out{root};
    double catalan = 1.0;  // Catalan(m - 1)
    double scale = 2.0 * root;
    for (int m = 1; m <= n; ++m) {
        if (m > 1) catalan = catalan * 2.0 * (2.0 * (m - 1) - 1.0) / m;
        scale *= step;
        out.push_back(catalan * scale);
    }
    return out;
}

// Germs of an entire (or disk-convergent) series obtained by rebasing from 0.
// All germs use the full truncation of f as source degree.
template <typename S>
PlanarAnalyticFunction<S> from_entire_series(TruncatedPlanarSeries<S> f, double radius_hint,
                                             std::string name = "series") {
    auto shared = std::make_shared<const TruncatedPlanarSeries<S>>(std::move(f));
    return PlanarAnalyticFunction<S>(
        std::move(name), [radius_hint](const S& a) { return ScalarTraits<S>::abs(a) < radius_hint; },
        [shared](const S& a, int n) {
            if (n > shared->trunc()) throw std::invalid_argument("germ truncation exceeds the source series");
            return rebase_series(*shared, a, n).germ;
        },
        [radius_hint](const S& a) { return std::optional<double>(radius_hint - ScalarTraits<S>::abs(a)); });
}

// a -> left_inverse(f_a), defined where the constant term of f_a is nonzero.
template <typename S>
PlanarAnalyticFunction<S> left_inverse_family(const PlanarAnalyticFunction<S>& f) {
    return PlanarAnalyticFunction<S>(
        "left_inverse(" + f.name() + ")",
        [f](const S& a) { return f.contains(a) && !ScalarTraits<S>::is_zero(f.germ(a, 0).series.coefficient(PlanarMonomial::unit())); },
        [f](const S& a, int n) { return Germ<S>{a, left_inverse(f.germ(a, n).series)}; },
        [f](const S& a) { return f.radius_hint(a); });
}

struct CompatibilityReport {
    double max_discrepancy = 0.0;
    bool passed = false;
    RebaseDiagnostics diagnostics;
};

// Rebases f_a (taken to `source_degree`, default n) to b and compares with f_b up to degree n.
template <typename S>
CompatibilityReport check_compatibility(const PlanarAnalyticFunction<S>& f, const S& a, const S& b, int n, double tol,
                                        std::optional<int> source_degree = std::nullopt) {
    const int src = source_degree.value_or(n);
    if (src < n) throw std::invalid_argument("check_compatibility: source degree below N");
    const auto moved = rebase_between(f.germ(a, src), b, n);
    const auto direct = f.germ(b, n);
    CompatibilityReport report;
    report.diagnostics = moved.diagnostics;
    for (const auto& [t, v] : subtract(moved.germ.series, direct.series).terms()) {
        report.max_discrepancy = std::max(report.max_discrepancy, ScalarTraits<S>::abs(v));
    }
    report.passed = report.max_discrepancy <= tol;
    return report;
}

// h_T(a) = <f_a, (x - a)^T> at each sample point.
template <typename S>
std::vector<S> coefficient_function(const PlanarAnalyticFunction<S>& f, const PlanarMonomial& t,
                                    const std::vector<S>& samples) {
    std::vector<S> out;
    out.reserve(samples.size());
    for (const auto& a : samples) out.push_back(f.germ(a, t.degree()).series.coefficient(t));
    return out;
}

}  // namespace planar
