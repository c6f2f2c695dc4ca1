#pragma once

// Derivative kernels for zeta and Gamma, and the planar germs built on them.
//
// Expanding n^(-s) = exp_k(-s log n) around s = r gives the coefficient
// alpha_T n^(-r) (-log n)^deg(T), so the zeta germ at r has coefficients
// alpha_T S_d(r) with S_d(r) = sum_n n^(-r) (-log n)^d = zeta^(d)(r). The
// same expansion of t^(s-1) inside the Gamma integral gives alpha_T Gamma^(d)(r).

#include "planar/expfam.hpp"
#include "planar/rebase.hpp"
#include "planar/scalar.hpp"
#include "planar/series.hpp"
#include "planar/tree.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

namespace planar {

inline constexpr int kZetaCutoff = 1000;
inline constexpr int kZetaTailOrder = 3;

struct ZetaGermSpec {
    Complex r;
    int k = 2;
    int trunc = 6;
    int cutoff = kZetaCutoff;         // terms summed directly
    int tail_order = kZetaTailOrder;  // Euler-Maclaurin Bernoulli terms, 0..4
};

struct GammaGermSpec {
    Complex r;
    int k = 2;
    int trunc = 6;
    double tol = 1e-12;  // relative quadrature tolerance
};

namespace detail {

// x^(-s) P(log x), P given by coefficients in log x.
struct LogPowerTerm {
    Complex s;
    std::vector<Complex> poly;

    LogPowerTerm derivative() const {
        // d/dx x^(-s) P(l) = x^(-s-1) (-s P(l) + P'(l))
        LogPowerTerm out{s + 1.0, std::vector<Complex>(poly.size(), Complex(0.0))};
        for (std::size_t i = 0; i < poly.size(); ++i) {
            out.poly[i] -= s * poly[i];
            if (i > 0) out.poly[i - 1] += static_cast<double>(i) * poly[i];
        }
        return out;
    }

    Complex at(double x) const {
        const double l = std::log(x);
        Complex p(0.0);
        for (std::size_t i = poly.size(); i-- > 0;) p = p * l + poly[i];
        return std::exp(-s * l) * p;
    }
};

inline Complex zeta_term(double n, int d, const Complex& r) {
    const double l = std::log(n);
    if (d == 0) return std::exp(-r * l);
    return std::exp(-r * l) * std::pow(-l, d);
}

}  // namespace detail

// S_d(r) = sum_{n>=1} n^(-r) (-log n)^d, the d-th derivative of zeta at r.
// Direct sum below the cutoff; the rest is the exact tail integral plus
// Euler-Maclaurin corrections at the cutoff.
inline Complex zeta_deriv(int d, Complex r, int cutoff = kZetaCutoff, int tail_order = kZetaTailOrder) {
    if (d < 0) throw std::invalid_argument("zeta_deriv: negative derivative order");
    if (!(r.real() > 1.0)) throw std::domain_error("zeta_deriv: requires Re r > 1");
    if (tail_order < 0 || tail_order > 4) throw std::invalid_argument("zeta_deriv: tail order must be 0..4");
    // The corrections behave like |r|^j / N^j; keep the cutoff well above |r| and d.
    const int n_cut = std::max({cutoff, static_cast<int>(20.0 * std::abs(r)), 20 * d, 10});

    Complex direct(0.0);
    for (int n = n_cut - 1; n >= 1; --n) direct += detail::zeta_term(n, d, r);  // small terms first

    // int_N^inf x^(-r) (-log x)^d dx = (-1)^d I_d, I_j = int_L^inf u^j e^(-cu) du.
    const double big_n = n_cut;
    const double l = std::log(big_n);
    const Complex c = r - 1.0;
    const Complex decay = std::exp(-c * l);
    Complex integral = decay / c;
    double lpow = 1.0;
    for (int j = 1; j <= d; ++j) {
        lpow *= l;
        integral = (lpow * decay + static_cast<double>(j) * integral) / c;
    }
    if (d % 2 == 1) integral = -integral;

    detail::LogPowerTerm f{r, std::vector<Complex>(static_cast<std::size_t>(d) + 1, Complex(0.0))};
    f.poly[static_cast<std::size_t>(d)] = (d % 2 == 0) ? 1.0 : -1.0;
    Complex correction = 0.5 * f.at(big_n);
    // B_2/2!, B_4/4!, B_6/6!, B_8/8!
    static constexpr double kBernoulli[] = {1.0 / 12.0, -1.0 / 720.0, 1.0 / 30240.0, -1.0 / 1209600.0};
    auto deriv = f.derivative();
    for (int j = 0; j < tail_order; ++j) {
        correction -= kBernoulli[j] * deriv.at(big_n);
        deriv = deriv.derivative().derivative();
    }
    return direct + integral + correction;
}

namespace detail {

// Composite Gauss-Legendre on [a, b], doubling the panel count until two
// successive sums agree.
template <typename F>
Complex panel_integral(F&& f, double a, double b, double rel_tol) {
    using Rule = boost::math::quadrature::gauss<double, 20>;
    auto run = [&](int panels, double* magnitude) {
        const double h = (b - a) / panels;
        Complex sum(0.0);
        double mag = 0.0;
        for (int i = 0; i < panels; ++i) {
            const double lo = a + h * i;
            const double hi = (i + 1 == panels) ? b : lo + h;
            sum += Rule::integrate(f, lo, hi);
            mag += Rule::integrate([&](double t) { return std::abs(f(t)); }, lo, hi);
        }
        *magnitude = mag;
        return sum;
    };
    double mag = 0.0;
    int panels = 8;
    Complex prev = run(panels, &mag);
    while (panels < (1 << 15)) {
        panels *= 2;
        const Complex next = run(panels, &mag);
        if (std::abs(next - prev) <= rel_tol * std::max(std::abs(next), mag)) return next;
        prev = next;
    }
    throw std::runtime_error("gamma_deriv: quadrature did not converge");
}

}  // namespace detail

// Gamma^(d)(r) = int_0^inf e^(-t) t^(r-1) (log t)^d dt.
// Split at t = 1; on (0, 1] the substitution t = e^(-u) removes the log singularity.
inline Complex gamma_deriv(int d, Complex r, double rel_tol = 1e-12) {
    if (d < 0) throw std::invalid_argument("gamma_deriv: negative derivative order");
    if (!(r.real() > 0.0)) throw std::domain_error("gamma_deriv: requires Re r > 0");
    const double re = r.real();
    const double sign = (d % 2 == 0) ? 1.0 : -1.0;
    constexpr double kDrop = 46.0;  // stop once the integrand is e^-46 below its peak

    // (0, 1]: int_0^inf exp(-e^-u) e^(-u r) (-u)^d du
    auto low_log = [&](double u) { return -re * u + (d > 0 ? d * std::log(u) : 0.0); };
    const double u_peak = std::max(d / re, 1e-3);
    double u_end = std::max(2.0, 2.0 * u_peak);
    while (low_log(u_end) > low_log(u_peak) - kDrop) u_end *= 1.5;
    auto low = [&](double u) {
        return std::exp(-std::exp(-u)) * std::exp(-u * r) * (sign * std::pow(u, d));
    };

    // [1, inf): e^-t t^(r-1) (log t)^d
    auto high_log = [&](double t) {
        return -t + (re - 1.0) * std::log(t) + (d > 0 ? d * std::log(std::log(t)) : 0.0);
    };
    const double t_peak = std::max(1.5, re - 1.0 + d);
    double t_end = std::max(10.0, 2.0 * t_peak);
    while (high_log(t_end) > high_log(t_peak) - kDrop) t_end *= 1.5;
    auto high = [&](double t) {
        const double l = std::log(t);
        return std::exp(-t + (r - 1.0) * l) * std::pow(l, d);
    };

    return detail::panel_integral(low, 0.0, u_end, rel_tol) + detail::panel_integral(high, 1.0, t_end, rel_tol);
}

namespace detail {

// alpha_T * factors[deg T] over the support of exp_k up to degree n.
inline ComplexSeries weight_exp_by_degree(int k, int n, const std::vector<Complex>& factors) {
    const auto alpha = exp_series(k, n);
    std::vector<ComplexSeries::Term> terms;
    terms.reserve(alpha.size());
    for (const auto& [t, a] : alpha.terms()) {
        terms.emplace_back(t, a.get_d() * factors[static_cast<std::size_t>(t.degree())]);
    }
    return ComplexSeries::from_sorted_terms(n, std::move(terms));
}

inline void check_germ_spec(int k, int trunc) {
    require_arity(k);
    if (trunc < 0) throw std::invalid_argument("germ truncation must be >= 0");
}

}  // namespace detail

inline std::vector<Complex> zeta_derivs(const ZetaGermSpec& spec) {
    std::vector<Complex> out;
    for (int d = 0; d <= spec.trunc; ++d) out.push_back(zeta_deriv(d, spec.r, spec.cutoff, spec.tail_order));
    return out;
}

inline std::vector<Complex> gamma_derivs(const GammaGermSpec& spec) {
    std::vector<Complex> out;
    for (int d = 0; d <= spec.trunc; ++d) out.push_back(gamma_deriv(d, spec.r, spec.tol));
    return out;
}

// Coefficient alpha_T S_deg(T)(r) on (s - r)^T.
inline ComplexGerm zeta_germ(const ZetaGermSpec& spec) {
    detail::check_germ_spec(spec.k, spec.trunc);
    return {spec.r, detail::weight_exp_by_degree(spec.k, spec.trunc, zeta_derivs(spec))};
}

// Coefficient alpha_T Gamma^(deg T)(r) on (s - r)^T.
inline ComplexGerm gamma_germ(const GammaGermSpec& spec) {
    detail::check_germ_spec(spec.k, spec.trunc);
    return {spec.r, detail::weight_exp_by_degree(spec.k, spec.trunc, gamma_derivs(spec))};
}

// Degree majorants of the zeta germ, |S_d(r)| times the exp_k degree sum.
// Exact because every alpha_T is positive; nothing is enumerated.
inline std::vector<double> zeta_germ_majorants(const ZetaGermSpec& spec) {
    detail::check_germ_spec(spec.k, spec.trunc);
    const auto sums = exp_degree_sums(spec.k, spec.trunc);
    std::vector<double> out;
    for (int d = 0; d <= spec.trunc; ++d) {
        out.push_back(std::abs(zeta_deriv(d, spec.r, spec.cutoff, spec.tail_order)) *
                      sums[static_cast<std::size_t>(d)].get_d());
    }
    return out;
}

// Moves a zeta germ from r0 to r1 by truncated rebasing. The step must stay
// inside the disk |s - r0| < |r0 - 1| around the pole at 1.
inline RebaseResult<Complex> zeta_continue(const ComplexGerm& germ, Complex r1, int n_out,
                                           std::optional<int> source_degree = std::nullopt) {
    const double radius = std::abs(germ.base - 1.0);
    if (!(std::abs(r1 - germ.base) < radius)) {
        throw std::domain_error("zeta_continue: target outside the disk of convergence around the base");
    }
    return rebase_between(germ, r1, n_out, source_degree);
}

// For a germ with coefficients alpha_T c_deg(T), the rebase sum over U of a
// fixed degree n collapses: sum_{deg U = n} alpha_U (U/T) = alpha_T / (n - m)!
// with m = deg T. Rebasing by h then only shifts the degree factors,
//   c'_m = sum_{n=m}^{N_in} c_n h^(n-m) / (n-m)!,
// which is the tree-level truncated rebase evaluated without enumerating U.
inline std::vector<Complex> shift_degree_factors(const std::vector<Complex>& c, Complex h, int n_out) {
    const int n_in = static_cast<int>(c.size()) - 1;
    if (n_out > n_in) throw std::invalid_argument("shift_degree_factors: N_out exceeds N_in");
    std::vector<Complex> out(static_cast<std::size_t>(n_out) + 1, Complex(0.0));
    for (int m = 0; m <= n_out; ++m) {
        Complex term(1.0);  // h^(n-m)/(n-m)!
        for (int n = m; n <= n_in; ++n) {
            if (n > m) term *= h / static_cast<double>(n - m);
            out[static_cast<std::size_t>(m)] += c[static_cast<std::size_t>(n)] * term;
        }
    }
    return out;
}

// zeta_continue for a germ given by its spec, using the degree-factor shift.
// Reaches source degrees far beyond what tree enumeration allows.
inline RebaseResult<Complex> zeta_continue_graded(const ZetaGermSpec& from, Complex r1, int n_out, int source_degree) {
    detail::check_germ_spec(from.k, n_out);
    const Complex h = r1 - from.r;
    if (!(std::abs(h) < std::abs(from.r - 1.0))) {
        throw std::domain_error("zeta_continue: target outside the disk of convergence around the base");
    }
    if (n_out > source_degree) throw std::invalid_argument("zeta_continue: N_out exceeds the source degree");
    ZetaGermSpec full = from;
    full.trunc = source_degree;
    const auto c = zeta_derivs(full);
    // zeta^(d)(r) grows like d!/(r-1)^(d+1) and leaves double range near d = 170.
    for (const auto& v : c) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw std::overflow_error("zeta_continue: source-degree derivatives overflow double precision");
        }
    }
    const auto shifted = shift_degree_factors(c, h, n_out);

    RebaseDiagnostics diag;
    diag.source_degree = source_degree;
    diag.target_degree = n_out;
    auto table = ExpCoefficientTable::get(from.k);
    double factorial = 1.0;  // (N_in - m)!
    for (int i = 2; i <= source_degree - n_out; ++i) factorial *= i;
    for (int m = n_out; m >= 0; --m) {
        double alpha_max = 0.0;
        for (const auto& [t, a] : table->layer(m)) alpha_max = std::max(alpha_max, a.get_d());
        const double last = std::abs(c.back()) * std::pow(std::abs(h), source_degree - m) / factorial;
        diag.last_degree_contribution = std::max(diag.last_degree_contribution, alpha_max * last);
        factorial *= source_degree - m + 1;
    }
    return {{r1, detail::weight_exp_by_degree(from.k, n_out, shifted)}, diag};
}

struct GammaShiftEntry {
    PlanarMonomial tree;
    Complex shifted;  // germ of Gamma(s + 1) at r
    Complex product;  // germ of s Gamma(s) at r
    double abs_diff = 0.0;
    double rel_diff = 0.0;
};

struct GammaShiftReport {
    Complex r;
    int trunc = 0;
    std::vector<GammaShiftEntry> entries;  // canonical order, union of both supports

    const GammaShiftEntry* find(const PlanarMonomial& t) const {
        for (const auto& e : entries) {
            if (e.tree == t) return &e;
        }
        return nullptr;
    }

    double max_abs_diff_upto(int degree) const {
        double worst = 0.0;
        for (const auto& e : entries) {
            if (e.tree.degree() <= degree) worst = std::max(worst, e.abs_diff);
        }
        return worst;
    }
};

// Compares the germ of Gamma(s + 1) with the planar product (r + (s - r)) * Gamma germ at r.
inline GammaShiftReport gamma_shift_probe(Complex r, int n, int k = 2, double tol = 1e-12) {
    if (!(r.real() > 0.0)) throw std::domain_error("gamma_shift_probe: requires Re r > 0");
    const auto shifted = gamma_germ({r + 1.0, k, n, tol}).series;
    const auto base = gamma_germ({r, k, n, tol}).series;
    const auto product = mul2(ComplexSeries::affine(r, n), base);

    GammaShiftReport report;
    report.r = r;
    report.trunc = n;
    std::vector<PlanarMonomial> trees;
    for (const auto& [t, v] : shifted.terms()) trees.push_back(t);
    for (const auto& [t, v] : product.terms()) trees.push_back(t);
    std::sort(trees.begin(), trees.end());
    trees.erase(std::unique(trees.begin(), trees.end()), trees.end());
    for (const auto& t : trees) {
        GammaShiftEntry e{t, shifted.coefficient(t), product.coefficient(t)};
        e.abs_diff = std::abs(e.shifted - e.product);
        const double scale = std::max(std::abs(e.shifted), std::abs(e.product));
        e.rel_diff = scale > 0.0 ? e.abs_diff / scale : 0.0;
        report.entries.push_back(std::move(e));
    }
    return report;
}

}  // namespace planar
