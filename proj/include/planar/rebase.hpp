#pragma once

// Re-expansion of planar series around a new base point.
//
//   <f, (x-a)^T> = sum_U <f, x^U> (U/T) a^(deg U - deg T)
//
// The sum over U is evaluated with contraction profiles (see profile.hpp).

#include "planar/profile.hpp"
#include "planar/scalar.hpp"
#include "planar/series.hpp"
#include "planar/tree.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string_view>
#include <optional>
#include <stdexcept>
#include <type_traits>
#include <vector>

namespace planar {

// A series in powers of (x - base).
template <typename S>
struct Germ {
    S base;
    TruncatedPlanarSeries<S> series;
};

using ComplexGerm = Germ<Complex>;
using RationalGerm = Germ<Rational>;

struct RebaseDiagnostics {
    int source_degree = 0;
    int target_degree = 0;
    // Largest |summed contribution| of the source terms of degree N_in to any target coefficient.
    double last_degree_contribution = 0.0;
    // max_T sum_{n > N_in} M_n C(n, deg T) |a|^(n - deg T), when majorants beyond N_in were supplied.
    std::optional<double> tail_bound;
};

template <typename S>
struct RebaseResult {
    Germ<S> germ;
    RebaseDiagnostics diagnostics;
};

namespace detail {

inline double binomial_double(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// Ordered sequences of non-unit trees ("forests") of total degree <= n_out.
// A contraction of Node(c_1..c_m) picks a target for every child; the units
// drop out and the rest, in order, are grafted under a fresh root.
class ForestIndex {
public:
    // Forests are numbered by degree, each built once as (first tree, rest).
    // Row t of the prepend table only covers forests of degree <= n - deg t.
    explicit ForestIndex(const TreeIndex& index) : n_(index.max_degree()) {
        const auto first_tree = index.degree_start(1);
        std::vector<std::vector<int>> forests{{}};
        degrees_.push_back(0);
        std::vector<int> upto{1};  // upto[d]: forests of degree <= d
        std::vector<std::pair<int, int>> parts{{0, 0}};
        for (int d = 1; d <= n_; ++d) {
            for (int t = first_tree; t < index.size() && index.degree(t) <= d; ++t) {
                const int rest_degree = d - index.degree(t);
                const int lo = rest_degree == 0 ? 0 : upto[static_cast<std::size_t>(rest_degree) - 1];
                for (int f = lo; f < upto[static_cast<std::size_t>(rest_degree)]; ++f) {
                    std::vector<int> next{t};
                    next.insert(next.end(), forests[static_cast<std::size_t>(f)].begin(), forests[static_cast<std::size_t>(f)].end());
                    forests.push_back(std::move(next));
                    degrees_.push_back(d);
                    parts.emplace_back(t, f);
                }
            }
            upto.push_back(static_cast<int>(forests.size()));
        }
        offsets_.reserve(static_cast<std::size_t>(index.size()) + 1);
        std::size_t total = 0;
        for (int t = 0; t < index.size(); ++t) {
            offsets_.push_back(total);
            total += t == 0 ? 0 : static_cast<std::size_t>(upto[static_cast<std::size_t>(n_ - index.degree(t))]);
        }
        prepend_.assign(total, -1);
        for (std::size_t id = 1; id < parts.size(); ++id) {
            const auto [t, f] = parts[id];
            prepend_[offsets_[static_cast<std::size_t>(t)] + static_cast<std::size_t>(f)] = static_cast<int>(id);
        }
        tree_.reserve(forests.size());
        for (const auto& f : forests) tree_.push_back(f.empty() ? 0 : f.size() == 1 ? f[0] : index.graft(f));
        index_degree_.reserve(static_cast<std::size_t>(index.size()));
        for (int t = 0; t < index.size(); ++t) index_degree_.push_back(index.degree(t));
    }

    int size() const { return static_cast<int>(degrees_.size()); }
    int degree(int f) const { return degrees_[static_cast<std::size_t>(f)]; }
    // Forest (t, f...) or -1 past the degree bound; t = 0 (unit) returns f.
    int prepend(int t, int f) const {
        if (t == 0) return f;
        if (index_degree_[static_cast<std::size_t>(t)] + degree(f) > n_) return -1;
        return prepend_[offsets_[static_cast<std::size_t>(t)] + static_cast<std::size_t>(f)];
    }
    // prepend() for t != 0 with deg t + deg f <= n already known.
    int prepend_fitting(int t, int f) const {
        return prepend_[offsets_[static_cast<std::size_t>(t)] + static_cast<std::size_t>(f)];
    }
    // Tree index of the forest grafted under one root.
    int tree(int f) const { return tree_[static_cast<std::size_t>(f)]; }

private:
    int n_;
    std::vector<int> degrees_;
    std::vector<int> index_degree_;
    std::vector<std::size_t> offsets_;
    std::vector<int> prepend_;
    std::vector<int> tree_;
};

// Core sum over source terms of degree <= n_in, producing targets of degree <= n_out.
//
// With U = Node(c_1..c_m), a^(deg U - deg T) splits over the children, so the
// contribution of U is the graft of the weighted child profiles. Terms are
// walked in canonical order and level i holds, for the current c_1..c_i, the
// weighted forests contributed by the remaining children. When c_i changes,
// level i is pushed through the profile of c_i into level i-1; a shared
// prefix is thus expanded once for all terms below it.
// Plain complex product; the library operator* pays for inf/nan recovery.
template <typename S>
S times(const S& x, const S& y) {
    if constexpr (std::is_same_v<S, Complex>) {
        return {x.real() * y.real() - x.imag() * y.imag(), x.real() * y.imag() + x.imag() * y.real()};
    } else {
        return x * y;
    }
}

template <typename S>
TruncatedPlanarSeries<S> shift_coefficients(const TruncatedPlanarSeries<S>& f, const S& a, int n_in, int n_out,
                                            double* last_contribution = nullptr) {
    using Traits = ScalarTraits<S>;
    auto index_ptr = TreeIndex::get(n_out);
    const TreeIndex& index = *index_ptr;
    const ForestIndex forests(index);
    ContractionProfiler profiler(index_ptr);
    const auto apow = power_table(a, n_in);
    const auto size = static_cast<std::size_t>(index.size());
    const bool track = last_contribution != nullptr;
    std::vector<S> acc(size, Traits::zero());
    std::vector<S> acc_last(track ? size : 0, Traits::zero());

    struct Level {
        std::vector<S> w;
        std::vector<char> live;
        std::vector<int> touched;
    };
    std::vector<Level> levels;
    auto level = [&](std::size_t i) -> Level& {
        while (levels.size() <= i) {
            levels.push_back({std::vector<S>(static_cast<std::size_t>(forests.size()), Traits::zero()),
                              std::vector<char>(static_cast<std::size_t>(forests.size()), 0), {}});
        }
        return levels[i];
    };
    auto add = [](Level& l, int f, const S& v) {
        const auto i = static_cast<std::size_t>(f);
        if (!l.live[i]) {
            l.live[i] = 1;
            l.touched.push_back(f);
        }
        l.w[i] += v;
    };

    // Children of the current run of terms, and how many are still open.
    std::vector<std::string_view> kids;
    std::vector<std::string_view> next_kids;
    int block_degree = -1;
    int block_arity = -1;
    Profile slot;
    std::vector<S> factors;
    std::vector<int> entry_degree;

    // Pushes level i (1-based child position) through the profile of kids[i-1].
    auto fold = [&](std::size_t i) {
        Level& from = level(i);
        if (from.touched.empty()) return;
        Level& to = level(i - 1);
        const std::string_view code = kids[i - 1];
        int dc = 0;
        for (char c : code) dc += (c == '\0');
        const Profile& profile = profiler.view(code, slot);
        // Entries are sorted by index, hence by degree.
        factors.clear();
        entry_degree.clear();
        for (const auto& e : profile) {
            const int de = index.degree(e.index);
            factors.push_back(S(static_cast<unsigned long>(e.count)) * apow[static_cast<std::size_t>(dc - de)]);
            entry_degree.push_back(de);
        }
        const std::size_t first = !profile.empty() && profile[0].index == 0 ? 1 : 0;
        for (int fr : from.touched) {
            const S& w = from.w[static_cast<std::size_t>(fr)];
            if (first == 1) add(to, fr, times(factors[0], w));  // unit contraction keeps the forest
            const int room = n_out - forests.degree(fr);
            for (std::size_t j = first; j < profile.size() && entry_degree[j] <= room; ++j) {
                add(to, forests.prepend_fitting(profile[j].index, fr), times(factors[j], w));
            }
        }
        for (int fr : from.touched) {
            from.w[static_cast<std::size_t>(fr)] = Traits::zero();
            from.live[static_cast<std::size_t>(fr)] = 0;
        }
        from.touched.clear();
    };
    // Folds levels down to `keep` (children c_1..c_keep stay shared).
    auto fold_to = [&](std::size_t keep) {
        for (std::size_t i = kids.size(); i > keep; --i) fold(i);
    };
    auto finish_block = [&]() {
        if (levels.empty()) return;
        fold_to(0);
        Level& root = level(0);
        const bool is_last = track && block_degree == n_in;
        for (int fr : root.touched) {
            const auto t = static_cast<std::size_t>(forests.tree(fr));
            acc[t] += root.w[static_cast<std::size_t>(fr)];
            if (is_last) acc_last[t] += root.w[static_cast<std::size_t>(fr)];
            root.w[static_cast<std::size_t>(fr)] = Traits::zero();
            root.live[static_cast<std::size_t>(fr)] = 0;
        }
        root.touched.clear();
        kids.clear();
    };

    for (const auto& [u, gamma] : f.terms()) {
        const int du = u.degree();
        if (du > n_in) break;
        if (du <= 1) {
            // Unit, or the leaf with its contractions to the unit and to itself.
            const bool is_last = track && du == n_in;
            const S to_unit = gamma * apow[static_cast<std::size_t>(du)];
            acc[0] += to_unit;
            if (is_last) acc_last[0] += to_unit;
            if (du == 1 && n_out >= 1) {
                acc[1] += gamma;
                if (is_last) acc_last[1] += gamma;
            }
            continue;
        }
        const std::string_view code = u.code();
        const int arity = static_cast<unsigned char>(code[0]);
        next_kids.clear();
        std::size_t pos = 1;
        for (int i = 0; i < arity; ++i) {
            const std::size_t start = pos;
            int open = 1;
            while (open > 0) open += static_cast<unsigned char>(code[pos++]) - 1;
            next_kids.push_back(code.substr(start, pos - start));
        }
        if (du != block_degree || arity != block_arity) {
            finish_block();
            block_degree = du;
            block_arity = arity;
        }
        std::size_t shared = 0;
        if (!kids.empty()) {
            while (shared < kids.size() && kids[shared] == next_kids[shared]) ++shared;
            fold_to(shared);
        }
        kids.assign(next_kids.begin(), next_kids.end());
        add(level(kids.size()), 0, gamma);
    }
    finish_block();

    if (track) {
        double worst = 0.0;
        for (const auto& v : acc_last) worst = std::max(worst, Traits::abs(v));
        *last_contribution = worst;
    }
    std::vector<typename TruncatedPlanarSeries<S>::Term> terms;
    for (int i = 0; i < index.size(); ++i) {
        if (!(acc[static_cast<std::size_t>(i)] == Traits::zero())) {
            terms.emplace_back(index.tree(i), std::move(acc[static_cast<std::size_t>(i)]));
        }
    }
    return TruncatedPlanarSeries<S>::from_sorted_terms(n_out, std::move(terms));
}

}  // namespace detail

// Exact finite basis change of a planar polynomial to powers of (x - a).
// Rebasing back by -a recovers f.
template <typename S>
Germ<S> rebase_polynomial(const TruncatedPlanarSeries<S>& f, const S& a) {
    if (!f.is_polynomial()) throw std::invalid_argument("rebase_polynomial: input is not flagged as a polynomial");
    auto shifted = detail::shift_coefficients(f, a, f.trunc(), f.trunc());
    return {a, shifted.as_polynomial()};
}

// Truncated expansion of f around a. Each output coefficient is the partial
// sum over source degrees <= source_degree. `tail_majorants`, if given, holds
// M_n for n = source_degree+1, source_degree+2, ... and feeds the tail bound.
template <typename S>
RebaseResult<S> rebase_series(const TruncatedPlanarSeries<S>& f, const S& a, int n_out,
                              std::optional<int> source_degree = std::nullopt,
                              const std::vector<double>& tail_majorants = {}) {
    const int n_in = source_degree.value_or(f.trunc());
    if (n_in > f.trunc()) throw std::invalid_argument("rebase_series: source degree exceeds the series truncation");
    if (n_out > n_in) throw std::invalid_argument("rebase_series: N_out exceeds N_in");
    if (n_out < 0) throw std::invalid_argument("rebase_series: negative N_out");
    RebaseDiagnostics diag;
    diag.source_degree = n_in;
    diag.target_degree = n_out;
    auto shifted = detail::shift_coefficients(f, a, n_in, n_out, &diag.last_degree_contribution);
    if (!tail_majorants.empty()) {
        const double abs_a = ScalarTraits<S>::abs(a);
        double worst = 0.0;
        for (int m = 0; m <= n_out; ++m) {
            double tail = 0.0;
            for (std::size_t i = 0; i < tail_majorants.size(); ++i) {
                const int n = n_in + 1 + static_cast<int>(i);
                tail += tail_majorants[i] * detail::binomial_double(n, m) * std::pow(abs_a, n - m);
            }
            worst = std::max(worst, tail);
        }
        diag.tail_bound = worst;
    }
    if (f.is_polynomial() && f.max_degree() <= n_in && n_out >= f.max_degree()) {
        shifted = shifted.as_polynomial();
    }
    return {{a, std::move(shifted)}, diag};
}

// Re-expands a germ at a around b: the (x - a)-series is shifted by b - a.
template <typename S>
RebaseResult<S> rebase_between(const Germ<S>& g, const S& b, int n_out, std::optional<int> source_degree = std::nullopt,
                               const std::vector<double>& tail_majorants = {}) {
    const S step = b - g.base;
    auto r = rebase_series(g.series, step, n_out, source_degree, tail_majorants);
    r.germ.base = b;
    return r;
}

// ---------------------------------------------------------------------------
// Composition identity used for path independence:
//   sum_U (S/U)(U/T) a^(n - deg U) (b - a)^(deg U - m) = (S/T) b^(n - m)

class CompositionChecker {
public:
    explicit CompositionChecker(int max_degree)
        : index_(TreeIndex::get(max_degree)), profiler_(index_), profiles_(static_cast<std::size_t>(index_->size())) {}

    const TreeIndex& index() const { return *index_; }

    std::uint64_t binom_indexed(int s, int t) {
        const Profile& p = profile(s);
        auto it = std::lower_bound(p.begin(), p.end(), t, [](const ProfileEntry& e, int i) { return e.index < i; });
        return (it != p.end() && it->index == t) ? it->count : 0;
    }

    // c_k = sum_{deg U = m + k} (S/U)(U/T), k = 0..n-m. Empty if deg T > deg S.
    std::vector<std::uint64_t> counting_sums(int s, int t) {
        const int n = index_->degree(s);
        const int m = index_->degree(t);
        if (m > n) return {};
        std::vector<std::uint64_t> c(static_cast<std::size_t>(n - m) + 1, 0);
        for (const auto& e : profile(s)) {
            const int du = index_->degree(e.index);
            if (du < m) continue;
            c[static_cast<std::size_t>(du - m)] += e.count * binom_indexed(e.index, t);
        }
        return c;
    }

    // sum_{deg U = m+k} (S/U)(U/T) = (S/T) C(n-m, k) for every k.
    bool counting_identity_holds(int s, int t) {
        const auto c = counting_sums(s, t);
        if (c.empty()) return true;
        const std::uint64_t st = binom_indexed(s, t);
        const int span = static_cast<int>(c.size()) - 1;
        std::uint64_t choose = 1;
        for (int k = 0; k <= span; ++k) {
            if (c[static_cast<std::size_t>(k)] != st * choose) return false;
            choose = choose * static_cast<std::uint64_t>(span - k) / static_cast<std::uint64_t>(k + 1);
        }
        return true;
    }

    template <typename S>
    bool composition_identity_holds(int s, int t, const S& a, const S& b) {
        const int n = index_->degree(s);
        const int m = index_->degree(t);
        if (m > n) {
            // Both sides are empty sums.
            return true;
        }
        const auto c = counting_sums(s, t);
        const S diff = b - a;
        S lhs = ScalarTraits<S>::zero();
        for (int k = 0; k <= n - m; ++k) {
            if (c[static_cast<std::size_t>(k)] == 0) continue;
            lhs += S(static_cast<unsigned long>(c[static_cast<std::size_t>(k)])) * pow_int(a, n - m - k) *
                   pow_int(diff, k);
        }
        const S rhs = S(static_cast<unsigned long>(binom_indexed(s, t))) * pow_int(b, n - m);
        return ScalarTraits<S>::equal(lhs, rhs);
    }

private:
    const Profile& profile(int i) {
        auto& slot = profiles_[static_cast<std::size_t>(i)];
        if (!slot) slot = profiler_.profile(index_->tree(i));
        return *slot;
    }

    std::shared_ptr<const TreeIndex> index_;
    ContractionProfiler profiler_;
    std::vector<std::optional<Profile>> profiles_;
};

// Evaluates both sides of the composition identity for one (S, T, a, b).
template <typename S>
bool check_composition_identity(const PlanarMonomial& s, const PlanarMonomial& t, const S& a, const S& b) {
    if (t.degree() > s.degree()) return true;
    CompositionChecker checker(s.degree());
    const int si = checker.index().find(s.code());
    const int ti = checker.index().find(t.code());
    return checker.composition_identity_holds(si, ti, a, b);
}

}  // namespace planar
