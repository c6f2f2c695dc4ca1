#pragma once

// Truncated formal planar power series over a scalar field.

#include "planar/scalar.hpp"
#include "planar/tree.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace planar {

template <typename S>
class TruncatedPlanarSeries {
public:
    using Scalar = S;
    using Traits = ScalarTraits<S>;
    using Term = std::pair<PlanarMonomial, S>;

    TruncatedPlanarSeries() = default;
    explicit TruncatedPlanarSeries(int trunc, bool polynomial = false) : trunc_(trunc), polynomial_(polynomial) {
        if (trunc < 0) throw std::invalid_argument("truncation degree must be >= 0");
    }

    // Sorts, merges duplicate monomials and drops zero coefficients.
    static TruncatedPlanarSeries from_terms(int trunc, std::vector<Term> terms, bool polynomial = false) {
        TruncatedPlanarSeries out(trunc, polynomial);
        std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.first < b.first; });
        for (auto& t : terms) {
            if (t.first.degree() > trunc) {
                throw std::invalid_argument("term " + t.first.to_string() + " exceeds truncation " +
                                            std::to_string(trunc));
            }
            if (!out.terms_.empty() && out.terms_.back().first == t.first) {
                out.terms_.back().second += t.second;
            } else {
                out.terms_.push_back(std::move(t));
            }
        }
        out.drop_zeros();
        return out;
    }

    // Terms must already be canonical: sorted, unique, degree <= trunc.
    static TruncatedPlanarSeries from_sorted_terms(int trunc, std::vector<Term> terms, bool polynomial = false) {
        TruncatedPlanarSeries out(trunc, polynomial);
        out.terms_ = std::move(terms);
        out.drop_zeros();
        return out;
    }

    static TruncatedPlanarSeries zero(int trunc) { return TruncatedPlanarSeries(trunc, true); }
    static TruncatedPlanarSeries constant(const S& c, int trunc) {
        return from_terms(trunc, {{PlanarMonomial::unit(), c}}, true);
    }
    static TruncatedPlanarSeries unit(int trunc) { return constant(Traits::one(), trunc); }
    static TruncatedPlanarSeries monomial(const PlanarMonomial& t, const S& c, int trunc) {
        return from_terms(trunc, {{t, c}}, true);
    }
    // c0 + x, the affine series used for base-point shifts.
    static TruncatedPlanarSeries affine(const S& c0, int trunc) {
        std::vector<Term> t{{PlanarMonomial::unit(), c0}};
        if (trunc >= 1) t.emplace_back(PlanarMonomial::leaf(), Traits::one());
        return from_terms(trunc, std::move(t), true);
    }

    int trunc() const { return trunc_; }
    bool is_polynomial() const { return polynomial_; }
    const std::vector<Term>& terms() const& { return terms_; }
    std::vector<Term> terms() && { return std::move(terms_); }  // safe in range-for over a temporary
    std::size_t size() const { return terms_.size(); }
    bool empty() const { return terms_.empty(); }

    // Highest degree carrying a stored coefficient (-1 for the zero series).
    int max_degree() const { return terms_.empty() ? -1 : terms_.back().first.degree(); }

    S coefficient(const PlanarMonomial& t) const {
        if (t.degree() > trunc_) {
            throw std::out_of_range("coefficient of " + t.to_string() + " requested above truncation " +
                                    std::to_string(trunc_));
        }
        auto it = std::lower_bound(terms_.begin(), terms_.end(), t,
                                   [](const Term& a, const PlanarMonomial& m) { return a.first < m; });
        if (it != terms_.end() && it->first == t) return it->second;
        return Traits::zero();
    }
    S operator[](const PlanarMonomial& t) const { return coefficient(t); }

    // Terms of exactly degree d, as a contiguous range.
    std::pair<typename std::vector<Term>::const_iterator, typename std::vector<Term>::const_iterator> degree_range(
        int d) const {
        auto lo = std::lower_bound(terms_.begin(), terms_.end(), d,
                                   [](const Term& a, int deg) { return a.first.degree() < deg; });
        auto hi = std::lower_bound(lo, terms_.end(), d + 1,
                                   [](const Term& a, int deg) { return a.first.degree() < deg; });
        return {lo, hi};
    }

    TruncatedPlanarSeries truncated(int n) const {
        if (n > trunc_) throw std::invalid_argument("cannot raise truncation degree");
        TruncatedPlanarSeries out(n, polynomial_ && max_degree() <= n);
        for (const auto& t : terms_) {
            if (t.first.degree() > n) break;
            out.terms_.push_back(t);
        }
        return out;
    }

    TruncatedPlanarSeries as_polynomial(bool flag = true) const {
        TruncatedPlanarSeries out = *this;
        out.polynomial_ = flag;
        return out;
    }

    bool equals(const TruncatedPlanarSeries& other, double tol = kDefaultRelTol) const {
        if (trunc_ != other.trunc_) return false;
        std::size_t i = 0, j = 0;
        while (i < terms_.size() || j < other.terms_.size()) {
            if (j == other.terms_.size() || (i < terms_.size() && terms_[i].first < other.terms_[j].first)) {
                if (!Traits::is_zero(terms_[i].second, tol)) return false;
                ++i;
            } else if (i == terms_.size() || other.terms_[j].first < terms_[i].first) {
                if (!Traits::is_zero(other.terms_[j].second, tol)) return false;
                ++j;
            } else {
                if (!Traits::equal(terms_[i].second, other.terms_[j].second, tol)) return false;
                ++i;
                ++j;
            }
        }
        return true;
    }

    friend bool operator==(const TruncatedPlanarSeries& a, const TruncatedPlanarSeries& b) {
        return a.trunc_ == b.trunc_ && a.terms_ == b.terms_;
    }

private:
    void drop_zeros() {
        std::erase_if(terms_, [](const Term& t) { return t.second == Traits::zero(); });
    }

    int trunc_ = 0;
    bool polynomial_ = false;
    std::vector<Term> terms_;
};

using RationalSeries = TruncatedPlanarSeries<Rational>;
using ComplexSeries = TruncatedPlanarSeries<Complex>;

// Hash-map accumulator for building series out of order.
template <typename S>
class SeriesAccumulator {
public:
    void add(const PlanarMonomial& t, const S& v) {
        auto [it, inserted] = acc_.try_emplace(t, v);
        if (!inserted) it->second += v;
    }
    TruncatedPlanarSeries<S> finish(int trunc, bool polynomial = false) {
        std::vector<typename TruncatedPlanarSeries<S>::Term> terms(std::make_move_iterator(acc_.begin()),
                                                                   std::make_move_iterator(acc_.end()));
        acc_.clear();
        return TruncatedPlanarSeries<S>::from_terms(trunc, std::move(terms), polynomial);
    }

private:
    std::unordered_map<PlanarMonomial, S, MonomialHash> acc_;
};

template <typename To, typename From>
TruncatedPlanarSeries<To> convert(const TruncatedPlanarSeries<From>& f) {
    std::vector<typename TruncatedPlanarSeries<To>::Term> terms;
    terms.reserve(f.size());
    for (const auto& [t, v] : f.terms()) {
        if constexpr (std::is_same_v<To, Complex>) {
            terms.emplace_back(t, ScalarTraits<From>::to_complex(v));
        } else {
            terms.emplace_back(t, To(v));
        }
    }
    return TruncatedPlanarSeries<To>::from_sorted_terms(f.trunc(), std::move(terms), f.is_polynomial());
}

// ---------------------------------------------------------------------------
// Vector-space structure

template <typename S>
TruncatedPlanarSeries<S> add(const TruncatedPlanarSeries<S>& f, const TruncatedPlanarSeries<S>& g) {
    // Mixed truncation coerces to the minimum.
    const int n = std::min(f.trunc(), g.trunc());
    const bool poly = f.is_polynomial() && g.is_polynomial() && f.max_degree() <= n && g.max_degree() <= n;
    std::vector<typename TruncatedPlanarSeries<S>::Term> out;
    auto i = f.terms().begin(), ie = f.terms().end();
    auto j = g.terms().begin(), je = g.terms().end();
    while (i != ie || j != je) {
        if (j == je || (i != ie && i->first < j->first)) {
            if (i->first.degree() <= n) out.push_back(*i);
            ++i;
        } else if (i == ie || j->first < i->first) {
            if (j->first.degree() <= n) out.push_back(*j);
            ++j;
        } else {
            if (i->first.degree() <= n) out.emplace_back(i->first, i->second + j->second);
            ++i;
            ++j;
        }
    }
    return TruncatedPlanarSeries<S>::from_sorted_terms(n, std::move(out), poly);
}

template <typename S>
TruncatedPlanarSeries<S> scale(const S& c, const TruncatedPlanarSeries<S>& f) {
    std::vector<typename TruncatedPlanarSeries<S>::Term> out;
    out.reserve(f.size());
    for (const auto& [t, v] : f.terms()) out.emplace_back(t, c * v);
    return TruncatedPlanarSeries<S>::from_sorted_terms(f.trunc(), std::move(out), f.is_polynomial());
}

template <typename S>
TruncatedPlanarSeries<S> subtract(const TruncatedPlanarSeries<S>& f, const TruncatedPlanarSeries<S>& g) {
    return add(f, scale(S(-1), g));
}

// ---------------------------------------------------------------------------
// Grafting products

// Binary grafting product: 1*m = m*1 = m, S*T = (S,T). Not associative.
template <typename S>
TruncatedPlanarSeries<S> mul2(const TruncatedPlanarSeries<S>& f, const TruncatedPlanarSeries<S>& g) {
    const int n = std::min(f.trunc(), g.trunc());
    SeriesAccumulator<S> acc;
    for (const auto& [a, fa] : f.terms()) {
        const int da = a.degree();
        if (da > n) break;
        for (const auto& [b, gb] : g.terms()) {
            if (da + b.degree() > n) break;
            if (a.is_unit()) {
                acc.add(b, fa * gb);
            } else if (b.is_unit()) {
                acc.add(a, fa * gb);
            } else {
                acc.add(PlanarMonomial::node({a, b}), fa * gb);
            }
        }
    }
    const bool poly = f.is_polynomial() && g.is_polynomial() && f.max_degree() + g.max_degree() <= n;
    return acc.finish(n, poly);
}

// k-ary grafting with unit absorption: unit arguments are dropped; none left
// gives the unit, one left gives that monomial, m >= 2 left gives a node.
template <typename S>
TruncatedPlanarSeries<S> mulk(const std::vector<TruncatedPlanarSeries<S>>& args) {
    if (args.size() < 2) throw std::invalid_argument("mulk needs k >= 2 arguments");
    if (args.size() > PlanarMonomial::kMaxArity) throw std::invalid_argument("mulk: arity exceeds 255");
    int n = args.front().trunc();
    bool poly = true;
    int max_deg_sum = 0;
    for (const auto& a : args) {
        n = std::min(n, a.trunc());
        poly = poly && a.is_polynomial();
        max_deg_sum += std::max(a.max_degree(), 0);
    }
    SeriesAccumulator<S> acc;
    std::vector<PlanarMonomial> chosen;
    std::function<void(std::size_t, int, const S&)> rec = [&](std::size_t k, int deg, const S& w) {
        if (k == args.size()) {
            if (chosen.empty()) {
                acc.add(PlanarMonomial::unit(), w);
            } else if (chosen.size() == 1) {
                acc.add(chosen.front(), w);
            } else {
                acc.add(PlanarMonomial::node(chosen), w);
            }
            return;
        }
        for (const auto& [t, v] : args[k].terms()) {
            if (deg + t.degree() > n) break;
            if (!t.is_unit()) chosen.push_back(t);
            rec(k + 1, deg + t.degree(), w * v);
            if (!t.is_unit()) chosen.pop_back();
        }
    };
    rec(0, 0, ScalarTraits<S>::one());
    return acc.finish(n, poly && max_deg_sum <= n);
}

// k-th power via the single k-ary corolla product.
template <typename S>
TruncatedPlanarSeries<S> pow(const TruncatedPlanarSeries<S>& f, int k) {
    if (k < 2) throw std::invalid_argument("pow: k must be >= 2");
    return mulk(std::vector<TruncatedPlanarSeries<S>>(static_cast<std::size_t>(k), f));
}

// ---------------------------------------------------------------------------
// Inverses and square roots, solved degree by degree.

namespace detail {

template <typename S>
using TermsByDegree = std::vector<std::vector<std::pair<PlanarMonomial, S>>>;

template <typename S>
TermsByDegree<S> split_by_degree(const TruncatedPlanarSeries<S>& f, int n) {
    TermsByDegree<S> out(static_cast<std::size_t>(n) + 1);
    for (const auto& [t, v] : f.terms()) {
        if (t.degree() > n) break;
        out[static_cast<std::size_t>(t.degree())].emplace_back(t, v);
    }
    return out;
}

template <typename S>
void require_nonzero_constant(const S& c, const char* what) {
    if (ScalarTraits<S>::is_zero(c, 1e-300)) {
        throw std::domain_error(std::string(what) + ": constant term vanishes");
    }
}

enum class Side { left, right };

template <typename S>
TruncatedPlanarSeries<S> one_sided_inverse(const TruncatedPlanarSeries<S>& f, Side side) {
    const int n = f.trunc();
    const S f1 = f.coefficient(PlanarMonomial::unit());
    require_nonzero_constant(f1, side == Side::left ? "left_inverse" : "right_inverse");
    const S g1 = ScalarTraits<S>::one() / f1;
    const auto fd = split_by_degree(f, n);
    TermsByDegree<S> gd(static_cast<std::size_t>(n) + 1);
    gd[0].emplace_back(PlanarMonomial::unit(), g1);

    for (int d = 1; d <= n; ++d) {
        SeriesAccumulator<S> num;
        for (const auto& [t, v] : fd[static_cast<std::size_t>(d)]) num.add(t, g1 * v);
        for (int d1 = 1; d1 < d; ++d1) {
            const auto& left = side == Side::left ? gd[static_cast<std::size_t>(d1)] : fd[static_cast<std::size_t>(d1)];
            const auto& right =
                side == Side::left ? fd[static_cast<std::size_t>(d - d1)] : gd[static_cast<std::size_t>(d - d1)];
            for (const auto& [c1, v1] : left) {
                for (const auto& [c2, v2] : right) num.add(PlanarMonomial::node({c1, c2}), v1 * v2);
            }
        }
        auto layer = num.finish(d);
        for (const auto& [t, v] : layer.terms()) {
            gd[static_cast<std::size_t>(d)].emplace_back(t, -v / f1);
        }
    }
    std::vector<std::pair<PlanarMonomial, S>> all;
    for (auto& layer : gd) all.insert(all.end(), layer.begin(), layer.end());
    return TruncatedPlanarSeries<S>::from_sorted_terms(n, std::move(all));
}

}  // namespace detail

// g with mul2(g, f) = 1 up to trunc.
template <typename S>
TruncatedPlanarSeries<S> left_inverse(const TruncatedPlanarSeries<S>& f) {
    return detail::one_sided_inverse(f, detail::Side::left);
}

// g with mul2(f, g) = 1 up to trunc.
template <typename S>
TruncatedPlanarSeries<S> right_inverse(const TruncatedPlanarSeries<S>& f) {
    return detail::one_sided_inverse(f, detail::Side::right);
}

// f with mul2(f, f) = u up to trunc and constant term root0.
template <typename S>
TruncatedPlanarSeries<S> sqrt_solve(const TruncatedPlanarSeries<S>& u, const S& root0, double tol = kDefaultRelTol) {
    const int n = u.trunc();
    const S u1 = u.coefficient(PlanarMonomial::unit());
    detail::require_nonzero_constant(u1, "sqrt_solve");
    if (!ScalarTraits<S>::equal(root0 * root0, u1, tol)) {
        throw std::invalid_argument("sqrt_solve: root0^2 does not match the constant term");
    }
    const S two_root = root0 + root0;
    const auto ud = detail::split_by_degree(u, n);
    detail::TermsByDegree<S> fd(static_cast<std::size_t>(n) + 1);
    fd[0].emplace_back(PlanarMonomial::unit(), root0);
    for (int d = 1; d <= n; ++d) {
        SeriesAccumulator<S> num;
        for (const auto& [t, v] : ud[static_cast<std::size_t>(d)]) num.add(t, v);
        for (int d1 = 1; d1 < d; ++d1) {
            for (const auto& [c1, v1] : fd[static_cast<std::size_t>(d1)]) {
                for (const auto& [c2, v2] : fd[static_cast<std::size_t>(d - d1)]) {
                    num.add(PlanarMonomial::node({c1, c2}), -(v1 * v2));
                }
            }
        }
        auto layer = num.finish(d);
        for (const auto& [t, v] : layer.terms()) fd[static_cast<std::size_t>(d)].emplace_back(t, v / two_root);
    }
    std::vector<std::pair<PlanarMonomial, S>> all;
    for (auto& layer : fd) all.insert(all.end(), layer.begin(), layer.end());
    return TruncatedPlanarSeries<S>::from_sorted_terms(n, std::move(all));
}

// ---------------------------------------------------------------------------
// Substitution, evaluation and degree-wise summaries

// gamma_T -> gamma_T * lambda^deg(T), i.e. f(lambda x).
template <typename S>
TruncatedPlanarSeries<S> scale_substitute(const TruncatedPlanarSeries<S>& f, const S& lambda) {
    const auto powers = power_table(lambda, f.trunc());
    std::vector<typename TruncatedPlanarSeries<S>::Term> out;
    out.reserve(f.size());
    for (const auto& [t, v] : f.terms()) out.emplace_back(t, v * powers[static_cast<std::size_t>(t.degree())]);
    return TruncatedPlanarSeries<S>::from_sorted_terms(f.trunc(), std::move(out), f.is_polynomial());
}

// Truncated partial sum of gamma_T a^deg(T).
template <typename S>
S eval(const TruncatedPlanarSeries<S>& f, const S& a) {
    const auto powers = power_table(a, f.trunc());
    S sum = ScalarTraits<S>::zero();
    for (const auto& [t, v] : f.terms()) sum += v * powers[static_cast<std::size_t>(t.degree())];
    return sum;
}

// Ordinary power series obtained by summing coefficients degree-wise.
template <typename S>
std::vector<S> classical_image(const TruncatedPlanarSeries<S>& f) {
    std::vector<S> out(static_cast<std::size_t>(f.trunc()) + 1, ScalarTraits<S>::zero());
    for (const auto& [t, v] : f.terms()) out[static_cast<std::size_t>(t.degree())] += v;
    return out;
}

// M_n = sum over degree-n trees of |gamma_T|.
template <typename S>
std::vector<double> majorants(const TruncatedPlanarSeries<S>& f) {
    std::vector<double> out(static_cast<std::size_t>(f.trunc()) + 1, 0.0);
    for (const auto& [t, v] : f.terms()) out[static_cast<std::size_t>(t.degree())] += ScalarTraits<S>::abs(v);
    return out;
}

// Cauchy product of ordinary truncated power series.
template <typename S>
std::vector<S> cauchy_product(const std::vector<S>& a, const std::vector<S>& b) {
    const std::size_t n = std::min(a.size(), b.size());
    std::vector<S> out(n, ScalarTraits<S>::zero());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; i + j < n; ++j) out[i + j] += a[i] * b[j];
    }
    return out;
}

// ---------------------------------------------------------------------------
// The binary-tree series g = sum over binary trees of degree >= 1 of x^T, and h = g(-x/4).

template <typename S = Rational>
TruncatedPlanarSeries<S> g_series(int n) {
    if (n < 1) throw std::invalid_argument("g_series: N must be >= 1");
    std::vector<typename TruncatedPlanarSeries<S>::Term> terms;
    for (int d = 1; d <= n; ++d) {
        for (auto& t : enumerate_binary(d)) terms.emplace_back(std::move(t), ScalarTraits<S>::one());
    }
    return TruncatedPlanarSeries<S>::from_sorted_terms(n, std::move(terms));
}

template <typename S = Rational>
TruncatedPlanarSeries<S> h_series(int n) {
    return scale_substitute(g_series<S>(n), S(S(-1) / S(4)));
}

// Majorants of g_series(n) without materializing it: the number of binary
// trees with d leaves, by the convolution recurrence.
inline std::vector<double> g_series_majorants(int n) {
    std::vector<double> count(static_cast<std::size_t>(n) + 1, 0.0);
    if (n >= 1) count[1] = 1.0;
    for (int d = 2; d <= n; ++d) {
        double c = 0.0;
        for (int i = 1; i < d; ++i) c += count[static_cast<std::size_t>(i)] * count[static_cast<std::size_t>(d - i)];
        count[static_cast<std::size_t>(d)] = c;
    }
    return count;
}

}  // namespace planar
