#pragma once

// The k-ary planar exponential exp_k(x) = sum_T A_T(k) x^T.
//
// exp_k is the unique series 1 + x + ... with exp_k(x)^k = exp_k(kx), the k-th
// power taken with the k-ary corolla product. Comparing the coefficient of a
// tree T of degree n >= 2 with root arity m and children S_1..S_m on both
// sides gives
//
//   A_T(k) = C(k, m) * prod_i A_{S_i}(k) / (k^n - k),   A_T(k) = 0 if m > k.

#include "planar/profile.hpp"
#include "planar/rebase.hpp"
#include "planar/scalar.hpp"
#include "planar/series.hpp"
#include "planar/tree.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace planar {

namespace detail {

inline mpz_class choose(int n, int k) {
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return r;
}

inline mpz_class denominator_for(int k, int n) {
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(k), static_cast<unsigned long>(n));
    return p - k;
}

inline void require_arity(int k) {
    if (k < 2) throw std::invalid_argument("exponential arity k must be >= 2");
    if (k > PlanarMonomial::kMaxArity) throw std::invalid_argument("exponential arity k must be <= 255");
}

}  // namespace detail

namespace detail {

// C(k, m) / (k^n - k) in the table's value type.
template <typename V>
V exp_scale(int k, int m, int n) {
    if constexpr (std::is_same_v<V, Rational>) {
        Rational r(choose(k, m), denominator_for(k, n));
        r.canonicalize();
        return r;
    } else {
        return choose(k, m).get_d() / denominator_for(k, n).get_d();
    }
}

}  // namespace detail

// Coefficients A_T(k), built one degree at a time and cached. V is Rational
// for the exact table or double for fast numeric work.
template <typename V>
class BasicExpCoefficientTable {
public:
    using Layer = std::vector<std::pair<PlanarMonomial, V>>;

    explicit BasicExpCoefficientTable(int k) : k_(k) {
        detail::require_arity(k);
        layers_.push_back({{PlanarMonomial::unit(), V(1)}});
        layers_.push_back({{PlanarMonomial::leaf(), V(1)}});
        merge_lex(1);
    }

    // Shared per-arity table.
    static std::shared_ptr<BasicExpCoefficientTable> get(int k) {
        static std::mutex mutex;
        static std::map<int, std::shared_ptr<BasicExpCoefficientTable>> tables;
        std::lock_guard lock(mutex);
        auto& slot = tables[k];
        if (!slot) slot = std::make_shared<BasicExpCoefficientTable>(k);
        return slot;
    }

    int arity() const { return k_; }

    int completed_degree() const {
        std::lock_guard lock(mutex_);
        return static_cast<int>(layers_.size()) - 1;
    }

    // Nonzero coefficients of degree d (the trees with all arities <= k), canonical order.
    const Layer& layer(int d) {
        std::lock_guard lock(mutex_);
        extend_to(d);
        return layers_[static_cast<std::size_t>(d)];
    }

    V coefficient(const PlanarMonomial& t) {
        const int d = t.degree();
        {
            std::lock_guard lock(mutex_);
            if (d < static_cast<int>(layers_.size())) return lookup(t);
        }
        return compute(t);
    }

    // A_T computed from the children, without touching the layer cache.
    V compute(const PlanarMonomial& t) {
        if (t.degree() <= 1) return V(1);
        const int m = t.arity();
        if (m > k_) return V(0);
        V r = detail::exp_scale<V>(k_, m, t.degree());
        for (const auto& c : t.children()) {
            r *= coefficient(c);
            if (r == 0) break;
        }
        return r;
    }

private:
    V lookup(const PlanarMonomial& t) const {
        const Layer& layer = layers_[static_cast<std::size_t>(t.degree())];
        auto it = std::lower_bound(layer.begin(), layer.end(), t,
                                   [](const auto& e, const PlanarMonomial& m) { return e.first < m; });
        if (it != layer.end() && it->first == t) return it->second;
        return V(0);
    }

    // Degree-n trees are generated directly in canonical order: root arity
    // first, then the children codes lexicographically (codes are prefix-free,
    // so this is the lexicographic order of the whole code).
    void extend_to(int d) {
        while (static_cast<int>(layers_.size()) <= d) {
            const int n = static_cast<int>(layers_.size());
            Layer next;
            next.reserve(layer_size(n));
            std::string prefix;
            for (int m = 2; m <= std::min(k_, n); ++m) {
                const V scale = detail::exp_scale<V>(k_, m, n);
                prefix.assign(1, static_cast<char>(m));
                emit(next, prefix, scale, m, n);
            }
            layers_.push_back(std::move(next));
            merge_lex(n);
        }
    }

    // Trees of degree n with arities 2..k, from the sizes of the lower layers.
    std::size_t layer_size(int n) const {
        // seq[j]: ordered sequences of m trees of total degree j
        std::vector<std::size_t> seq(static_cast<std::size_t>(n) + 1, 0);
        for (int j = 1; j < n; ++j) seq[static_cast<std::size_t>(j)] = layers_[static_cast<std::size_t>(j)].size();
        std::size_t total = 0;
        for (int m = 2; m <= std::min(k_, n); ++m) {
            std::vector<std::size_t> next(seq.size(), 0);
            for (int j = 1; j < n; ++j) {
                for (int i = 1; i + j <= n; ++i) {
                    next[static_cast<std::size_t>(i + j)] += seq[static_cast<std::size_t>(j)] * layers_[static_cast<std::size_t>(i)].size();
                }
            }
            seq = std::move(next);
            total += seq[static_cast<std::size_t>(n)];
        }
        return total;
    }

    void emit(Layer& out, std::string& prefix, const V& weight, int children, int leaves) {
        const std::size_t mark = prefix.size();
        if (children == 1) {
            for (const auto& [t, v] : layers_[static_cast<std::size_t>(leaves)]) {
                prefix += t.code();
                out.emplace_back(PlanarMonomial::from_code(prefix), weight * v);
                prefix.resize(mark);
            }
            return;
        }
        for (const auto& e : lex_[static_cast<std::size_t>(leaves - children + 1)]) {
            prefix += *e.code;
            if (e.degree == 1) {
                emit(out, prefix, weight, children - 1, leaves - 1);
            } else {
                emit(out, prefix, V(weight * *e.value), children - 1, leaves - e.degree);
            }
            prefix.resize(mark);
        }
    }

    // lex_[n] = all stored trees of degree 1..n, sorted by code.
    void merge_lex(int n) {
        if (n < 1) return;
        if (lex_.empty()) lex_.emplace_back();  // degree 0 slot, unused
        std::vector<LexEntry> fresh;
        for (const auto& [t, v] : layers_[static_cast<std::size_t>(n)]) fresh.push_back({&t.code(), &v, n});
        std::vector<LexEntry> merged;
        const auto& prev = lex_.back();
        merged.reserve(prev.size() + fresh.size());
        std::merge(prev.begin(), prev.end(), fresh.begin(), fresh.end(), std::back_inserter(merged),
                   [](const LexEntry& x, const LexEntry& y) { return *x.code < *y.code; });
        lex_.push_back(std::move(merged));
    }

    struct LexEntry {
        const std::string* code;
        const V* value;
        int degree;
    };

    int k_;
    mutable std::mutex mutex_;
    std::deque<Layer> layers_;  // stable references across extension
    std::vector<std::vector<LexEntry>> lex_;
};

using ExpCoefficientTable = BasicExpCoefficientTable<Rational>;
using ExpDoubleTable = BasicExpCoefficientTable<double>;

inline Rational exp_coeff(const PlanarMonomial& t, int k) {
    detail::require_arity(k);
    return ExpCoefficientTable::get(k)->coefficient(t);
}

// exp_k truncated at degree n, exact.
inline RationalSeries exp_series(int k, int n) {
    detail::require_arity(k);
    if (n < 0) throw std::invalid_argument("exp_series: negative truncation");
    auto table = ExpCoefficientTable::get(k);
    std::vector<RationalSeries::Term> terms;
    for (int d = 0; d <= n; ++d) {
        const auto& layer = table->layer(d);
        terms.insert(terms.end(), layer.begin(), layer.end());
    }
    return RationalSeries::from_sorted_terms(n, std::move(terms));
}

// exp_k with double coefficients from the double table (same recursion,
// relative rounding of order 1e-15 per coefficient).
inline ComplexSeries exp_series_complex(int k, int n) {
    detail::require_arity(k);
    if (n < 0) throw std::invalid_argument("exp_series: negative truncation");
    auto table = ExpDoubleTable::get(k);
    std::vector<ComplexSeries::Term> terms;
    for (int d = 0; d <= n; ++d) {
        for (const auto& [t, v] : table->layer(d)) terms.emplace_back(t, Complex(v));
    }
    return ComplexSeries::from_sorted_terms(n, std::move(terms));
}

// Degree sums E_n = sum_{deg T = n} A_T(k), from the coefficient recursion
// summed over root arity and compositions of n (no tree enumeration).
inline std::vector<Rational> exp_degree_sums(int k, int n) {
    detail::require_arity(k);
    std::vector<Rational> e(static_cast<std::size_t>(n) + 1, Rational(0));
    e[0] = 1;
    if (n >= 1) e[1] = 1;
    for (int d = 2; d <= n; ++d) {
        // power[j] = coefficient of x^j in (sum_{i>=1} E_i x^i)^m, built up over m.
        std::vector<Rational> power(static_cast<std::size_t>(d) + 1, Rational(0));
        for (int j = 1; j < d; ++j) power[static_cast<std::size_t>(j)] = e[static_cast<std::size_t>(j)];
        Rational total(0);
        for (int m = 2; m <= std::min(k, d); ++m) {
            std::vector<Rational> next(static_cast<std::size_t>(d) + 1, Rational(0));
            for (int j = 1; j <= d; ++j) {
                if (sgn(power[static_cast<std::size_t>(j)]) == 0) continue;
                for (int i = 1; i + j <= d && i < d; ++i) {
                    next[static_cast<std::size_t>(i + j)] += power[static_cast<std::size_t>(j)] * e[static_cast<std::size_t>(i)];
                }
            }
            power = std::move(next);
            total += Rational(detail::choose(k, m)) * power[static_cast<std::size_t>(d)];
        }
        Rational den(detail::denominator_for(k, d));
        e[static_cast<std::size_t>(d)] = total / den;
    }
    return e;
}

// Majorants of exp_k without materializing the series (all A_T(k) >= 0).
inline std::vector<double> exp_majorants(int k, int n) {
    std::vector<double> out;
    for (const auto& v : exp_degree_sums(k, n)) out.push_back(v.get_d());
    return out;
}

// alpha_T / m! == sum_{deg U = deg T + m} (U/T) alpha_U, exactly.
inline bool corollary43_check(const PlanarMonomial& t, int m, int k) {
    detail::require_arity(k);
    if (m < 0) throw std::invalid_argument("corollary43_check: m must be >= 0");
    const int n = t.degree();
    auto table = ExpCoefficientTable::get(k);
    Rational factorial(1);
    for (int i = 2; i <= m; ++i) factorial *= i;
    const Rational lhs = table->coefficient(t) / factorial;

    auto index = TreeIndex::get(n);
    ContractionProfiler profiler(index);
    const int ti = index->find(t.code());
    Rational rhs(0);
    for (const auto& [u, alpha] : table->layer(n + m)) {
        for (const auto& e : profiler.profile(u)) {
            if (e.index == ti) rhs += alpha * Rational(static_cast<unsigned long>(e.count));
        }
    }
    return lhs == rhs;
}

struct TranslationReport {
    double max_discrepancy = 0.0;
    bool passed = false;
    RebaseDiagnostics diagnostics;
};

// Compares the expansion of exp_k around lambda with e^lambda exp_k.
inline TranslationReport translation_check(int k, Complex lambda, int n, int n_source, double tol) {
    detail::require_arity(k);
    auto rebased = rebase_series(exp_series_complex(k, n_source), lambda, n);
    const auto expected = scale(std::exp(lambda), exp_series_complex(k, n));
    TranslationReport report;
    report.diagnostics = rebased.diagnostics;
    for (const auto& [t, v] : subtract(rebased.germ.series, expected).terms()) {
        report.max_discrepancy = std::max(report.max_discrepancy, std::abs(v));
    }
    report.passed = report.max_discrepancy <= tol;
    return report;
}

// n^s = exp_k(s log n) = sum_T alpha_T (log n)^deg(T) s^T.
inline ComplexSeries npow(long base, int k, int n) {
    if (base < 1) throw std::invalid_argument("npow: base must be >= 1");
    const double log_n = std::log(static_cast<double>(base));
    return scale_substitute(convert<Complex>(exp_series(k, n)), Complex(log_n, 0.0));
}

}  // namespace planar
