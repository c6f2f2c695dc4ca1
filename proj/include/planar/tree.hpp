#pragma once

// Finite reduced planar rooted trees (the monomial index set of planar series).
//
// A tree is stored as its preorder arity code: every vertex contributes one
// byte, 0 for a leaf and the number of children for an internal vertex. The
// unit (empty tree) is the empty code. Codes of complete trees are prefix
// free, so lexicographic comparison of concatenated child codes is the same as
// comparing the children one after another.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

namespace planar {

class PlanarMonomial {
public:
    static constexpr int kMaxArity = 255;

    PlanarMonomial() = default;  // the unit

    static PlanarMonomial unit() { return {}; }
    static PlanarMonomial leaf() { return PlanarMonomial(std::string(1, '\0'), 1); }

    static PlanarMonomial node(std::span<const PlanarMonomial> children) {
        if (children.size() < 2) throw std::invalid_argument("node needs at least 2 children");
        if (children.size() > kMaxArity) throw std::invalid_argument("node arity exceeds 255");
        std::string code(1, static_cast<char>(children.size()));
        int degree = 0;
        for (const auto& c : children) {
            if (c.is_unit()) throw std::invalid_argument("unit cannot be a child of a node");
            code += c.code_;
            degree += c.degree_;
        }
        return PlanarMonomial(std::move(code), degree);
    }
    static PlanarMonomial node(std::initializer_list<PlanarMonomial> children) {
        return node(std::span<const PlanarMonomial>(children.begin(), children.size()));
    }

    // Trusted construction from a complete preorder code.
    static PlanarMonomial from_code(std::string code) {
        int degree = 0;
        if (!code.empty()) {
            std::size_t pos = 0;
            degree = scan(code, pos);
            if (pos != code.size()) throw std::invalid_argument("trailing bytes in tree code");
        }
        return PlanarMonomial(std::move(code), degree);
    }

    bool is_unit() const { return code_.empty(); }
    bool is_leaf() const { return code_.size() == 1; }
    bool is_node() const { return code_.size() > 1; }
    int degree() const { return degree_; }
    int arity() const { return is_node() ? static_cast<unsigned char>(code_[0]) : 0; }
    const std::string& code() const { return code_; }

    // Children of a node in left-to-right order; empty for unit and leaf.
    std::vector<PlanarMonomial> children() const {
        std::vector<PlanarMonomial> out;
        if (!is_node()) return out;
        out.reserve(static_cast<std::size_t>(arity()));
        std::size_t pos = 1;
        for (int i = 0; i < arity(); ++i) {
            const std::size_t start = pos;
            const int d = scan(code_, pos);
            out.push_back(PlanarMonomial(code_.substr(start, pos - start), d));
        }
        return out;
    }

    std::string to_string() const {
        if (is_unit()) return "1";
        std::string out;
        std::size_t pos = 0;
        format_at(out, pos);
        return out;
    }

    friend bool operator==(const PlanarMonomial& a, const PlanarMonomial& b) { return a.code_ == b.code_; }

    // Canonical order: degree, then preorder arity code.
    friend std::strong_ordering operator<=>(const PlanarMonomial& a, const PlanarMonomial& b) {
        if (a.degree_ != b.degree_) return a.degree_ <=> b.degree_;
        const int c = a.code_.compare(b.code_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

private:
    PlanarMonomial(std::string code, int degree) : code_(std::move(code)), degree_(degree) {}

    // Consumes one complete subtree starting at pos; returns its degree.
    static int scan(std::string_view code, std::size_t& pos) {
        if (pos >= code.size()) throw std::invalid_argument("truncated tree code");
        const int a = static_cast<unsigned char>(code[pos++]);
        if (a == 0) return 1;
        if (a == 1) throw std::invalid_argument("unary vertex in tree code");
        int d = 0;
        for (int i = 0; i < a; ++i) d += scan(code, pos);
        return d;
    }

    void format_at(std::string& out, std::size_t& pos) const {
        const int a = static_cast<unsigned char>(code_[pos++]);
        if (a == 0) {
            out += 'x';
            return;
        }
        out += '(';
        for (int i = 0; i < a; ++i) {
            if (i > 0) out += ',';
            format_at(out, pos);
        }
        out += ')';
    }

    std::string code_;
    int degree_ = 0;
};

struct MonomialHash {
    std::size_t operator()(const PlanarMonomial& m) const noexcept { return std::hash<std::string>{}(m.code()); }
};

inline std::string format(const PlanarMonomial& m) { return m.to_string(); }

// tree := "1" | "x" | "(" tree ("," tree)+ ")"; ASCII spaces are ignored.
inline PlanarMonomial parse(std::string_view text) {
    std::string s;
    s.reserve(text.size());
    for (char c : text) {
        if (c != ' ') s.push_back(c);
    }
    if (s == "1") return PlanarMonomial::unit();

    std::size_t pos = 0;
    auto fail = [&](const std::string& what) -> void {
        throw std::invalid_argument("tree parse error at " + std::to_string(pos) + ": " + what + " in '" +
                                    std::string(text) + "'");
    };
    std::function<PlanarMonomial()> tree = [&]() -> PlanarMonomial {
        if (pos >= s.size()) fail("unexpected end");
        const char c = s[pos];
        if (c == 'x') {
            ++pos;
            return PlanarMonomial::leaf();
        }
        if (c == '1') fail("unit inside a node");
        if (c != '(') fail(std::string("unexpected '") + c + "'");
        ++pos;
        std::vector<PlanarMonomial> kids;
        kids.push_back(tree());
        while (pos < s.size() && s[pos] == ',') {
            ++pos;
            kids.push_back(tree());
        }
        if (pos >= s.size() || s[pos] != ')') fail("expected ',' or ')'");
        ++pos;
        if (kids.size() < 2) fail("node with fewer than 2 children");
        return PlanarMonomial::node(kids);
    };
    PlanarMonomial result = tree();
    if (pos != s.size()) fail("trailing characters");
    return result;
}

// Right comb: comb(1) = x, comb(n+1) = (comb(n), x). comb(0) is the unit by convention.
inline PlanarMonomial comb(int n) {
    if (n < 0) throw std::invalid_argument("comb: negative degree");
    if (n == 0) return PlanarMonomial::unit();
    std::string code(static_cast<std::size_t>(n - 1), '\2');
    code.append(static_cast<std::size_t>(n), '\0');
    return PlanarMonomial::from_code(std::move(code));
}

// ---------------------------------------------------------------------------
// Enumeration

namespace detail {

// Process-wide cache of canonical tree codes per (degree, arity bounds).
class TreeCatalog {
public:
    static TreeCatalog& instance() {
        static TreeCatalog catalog;
        return catalog;
    }

    // Sorted (canonical) codes of all trees of degree n with internal arities in [lo, hi].
    std::shared_ptr<const std::vector<std::string>> codes(int n, int lo, int hi) {
        std::lock_guard lock(mutex_);
        return codes_locked(n, lo, hi);
    }

private:
    using Key = std::tuple<int, int, int>;

    std::shared_ptr<const std::vector<std::string>> codes_locked(int n, int lo, int hi) {
        if (n <= 1) {
            return std::make_shared<const std::vector<std::string>>(1, n == 0 ? std::string() : std::string(1, '\0'));
        }
        hi = std::min(hi, n);
        const Key key{n, lo, hi};
        if (auto it = cache_.find(key); it != cache_.end()) return it->second;

        auto out = std::make_shared<std::vector<std::string>>();
        std::vector<std::shared_ptr<const std::vector<std::string>>> by_degree(static_cast<std::size_t>(n));
        for (int d = 1; d < n; ++d) by_degree[static_cast<std::size_t>(d)] = codes_locked(d, lo, hi);
        for (int m = lo; m <= hi; ++m) {
            std::string prefix(1, static_cast<char>(m));
            append_children(*out, by_degree, prefix, m, n);
        }
        std::sort(out->begin(), out->end());
        cache_.emplace(key, out);
        return out;
    }

    static void append_children(std::vector<std::string>& out,
                                const std::vector<std::shared_ptr<const std::vector<std::string>>>& by_degree,
                                std::string& prefix, int remaining_children, int remaining_leaves) {
        if (remaining_children == 0) {
            if (remaining_leaves == 0) out.push_back(prefix);
            return;
        }
        const int max_d = remaining_leaves - (remaining_children - 1);
        for (int d = 1; d <= max_d; ++d) {
            const std::size_t mark = prefix.size();
            for (const auto& c : *by_degree[static_cast<std::size_t>(d)]) {
                prefix += c;
                append_children(out, by_degree, prefix, remaining_children - 1, remaining_leaves - d);
                prefix.resize(mark);
            }
        }
    }

    std::mutex mutex_;
    std::map<Key, std::shared_ptr<const std::vector<std::string>>> cache_;
};

inline std::vector<PlanarMonomial> to_monomials(const std::vector<std::string>& codes) {
    std::vector<PlanarMonomial> out;
    out.reserve(codes.size());
    for (const auto& c : codes) out.push_back(PlanarMonomial::from_code(c));
    return out;
}

}  // namespace detail

// Trees of degree n whose internal vertices all have arity in [2, max_arity], canonical order.
inline std::vector<PlanarMonomial> enumerate_restricted(int n, int max_arity) {
    if (n < 0) throw std::invalid_argument("enumerate: negative degree");
    return detail::to_monomials(*detail::TreeCatalog::instance().codes(n, 2, std::max(max_arity, 1)));
}

// All reduced planar trees of degree n in canonical order; enumerate(0) = [unit].
inline std::vector<PlanarMonomial> enumerate(int n) { return enumerate_restricted(n, n < 2 ? 2 : n); }

// Trees all of whose internal vertices are binary; count Catalan(n-1).
inline std::vector<PlanarMonomial> enumerate_binary(int n) {
    if (n < 1) throw std::invalid_argument("enumerate_binary: degree must be >= 1");
    return enumerate_restricted(n, 2);
}

// All trees of degree <= max_degree, canonical order.
inline std::vector<PlanarMonomial> enumerate_upto(int max_degree, int max_arity = PlanarMonomial::kMaxArity) {
    std::vector<PlanarMonomial> out;
    for (int n = 0; n <= max_degree; ++n) {
        auto layer = enumerate_restricted(n, std::min(max_arity, std::max(n, 2)));
        out.insert(out.end(), std::make_move_iterator(layer.begin()), std::make_move_iterator(layer.end()));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Contraction and planar binomial coefficients

class LeafSubset {
public:
    LeafSubset(PlanarMonomial monomial, std::vector<int> indices)
        : monomial_(std::move(monomial)), indices_(std::move(indices)) {
        std::sort(indices_.begin(), indices_.end());
        indices_.erase(std::unique(indices_.begin(), indices_.end()), indices_.end());
        for (int i : indices_) {
            if (i < 0 || i >= monomial_.degree()) {
                throw std::out_of_range("leaf index " + std::to_string(i) + " out of range for degree " +
                                        std::to_string(monomial_.degree()));
            }
        }
    }

    const PlanarMonomial& monomial() const { return monomial_; }
    const std::vector<int>& indices() const { return indices_; }

private:
    PlanarMonomial monomial_;
    std::vector<int> indices_;
};

namespace detail {

// Contracts the subtree starting at code[pos] to the leaves flagged in `keep`,
// numbering leaves from `leaf`. Returns the contracted code (empty if nothing survives).
inline std::string contract_at(const std::string& code, std::size_t& pos, int& leaf, std::uint64_t keep) {
    const int a = static_cast<unsigned char>(code[pos++]);
    if (a == 0) {
        const bool kept = (keep >> leaf) & 1u;
        ++leaf;
        return kept ? std::string(1, '\0') : std::string();
    }
    std::string body;
    int surviving = 0;
    std::string only;
    for (int i = 0; i < a; ++i) {
        std::string c = contract_at(code, pos, leaf, keep);
        if (c.empty()) continue;
        ++surviving;
        if (surviving == 1) only = c;
        body += c;
    }
    if (surviving == 0) return {};
    if (surviving == 1) return only;
    return std::string(1, static_cast<char>(surviving)) + body;
}

inline std::string contract_mask(const PlanarMonomial& u, std::uint64_t keep) {
    if (u.is_unit()) return {};
    std::size_t pos = 0;
    int leaf = 0;
    return contract_at(u.code(), pos, leaf, keep);
}

}  // namespace detail

inline PlanarMonomial contract(const LeafSubset& subset) {
    if (subset.monomial().degree() > 64) throw std::invalid_argument("contract: degree above 64 unsupported");
    std::uint64_t keep = 0;
    for (int i : subset.indices()) keep |= std::uint64_t{1} << i;
    return PlanarMonomial::from_code(detail::contract_mask(subset.monomial(), keep));
}

inline PlanarMonomial contract(const PlanarMonomial& u, std::vector<int> leaves) {
    return contract(LeafSubset(u, std::move(leaves)));
}

// Planar binomial coefficient (U/T): the number of deg(T)-subsets I of the
// leaves of U with U|I = T. Enumerates subsets directly.
inline std::uint64_t binom(const PlanarMonomial& u, const PlanarMonomial& t) {
    const int n = u.degree();
    const int m = t.degree();
    if (m > n) return 0;
    if (m == 0) return 1;
    if (n > 62) throw std::invalid_argument("binom: degree above 62 unsupported");
    std::uint64_t count = 0;
    // Gosper's hack over all m-subsets of n bits.
    std::uint64_t mask = (std::uint64_t{1} << m) - 1;
    const std::uint64_t limit = std::uint64_t{1} << n;
    while (mask < limit) {
        if (detail::contract_mask(u, mask) == t.code()) ++count;
        const std::uint64_t c = mask & (~mask + 1);
        const std::uint64_t r = mask + c;
        mask = (((r ^ mask) >> 2) / c) | r;
    }
    return count;
}

}  // namespace planar
