#pragma once

// Contraction profiles: for a tree U, the vector of planar binomial
// coefficients (U/T) over all T up to a degree bound.
//
// Contraction commutes with grafting: the contraction of Node(c1..cm) to a
// leaf subset is the unit-absorbing graft of the children's contractions. The
// profile of a node is therefore the multilinear graft of its children's
// profiles, which is far cheaper than enumerating leaf subsets. binom() in
// tree.hpp keeps the direct subset enumeration; tests cross-check the two.

#include "planar/tree.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace planar {

// Dense numbering of all trees of degree <= max_degree in canonical order.
class TreeIndex {
public:
    explicit TreeIndex(int max_degree) : max_degree_(max_degree) {
        if (max_degree < 0) throw std::invalid_argument("TreeIndex: negative degree");
        trees_ = enumerate_upto(max_degree);
        degree_start_.assign(static_cast<std::size_t>(max_degree) + 2, 0);
        for (std::size_t i = 0; i < trees_.size(); ++i) {
            lookup_.emplace(trees_[i].code(), static_cast<int>(i));
            degrees_.push_back(trees_[i].degree());
        }
        for (int d = 0; d <= max_degree + 1; ++d) {
            degree_start_[static_cast<std::size_t>(d)] = static_cast<int>(
                std::lower_bound(degrees_.begin(), degrees_.end(), d) - degrees_.begin());
        }
        build_binary_table();
    }

    TreeIndex(const TreeIndex&) = delete;
    TreeIndex& operator=(const TreeIndex&) = delete;

    // Shared instance per degree bound.
    static std::shared_ptr<const TreeIndex> get(int max_degree) {
        static std::mutex mutex;
        static std::unordered_map<int, std::shared_ptr<const TreeIndex>> cache;
        std::lock_guard lock(mutex);
        auto& slot = cache[max_degree];
        if (!slot) slot = std::make_shared<const TreeIndex>(max_degree);
        return slot;
    }

    int max_degree() const { return max_degree_; }
    int size() const { return static_cast<int>(trees_.size()); }
    const PlanarMonomial& tree(int i) const { return trees_[static_cast<std::size_t>(i)]; }
    int degree(int i) const { return degrees_[static_cast<std::size_t>(i)]; }
    // First index of degree d (d may be max_degree + 1, giving size()).
    int degree_start(int d) const { return degree_start_[static_cast<std::size_t>(d)]; }

    int find(std::string_view code) const {
        auto it = lookup_.find(code);
        return it == lookup_.end() ? -1 : it->second;
    }

    // Binary graft of two non-unit trees; -1 if the result exceeds max_degree.
    int graft2(int i, int j) const {
        const int di = degree(i);
        if (di + degree(j) > max_degree_) return -1;
        return binary_[static_cast<std::size_t>(row_offset_[static_cast<std::size_t>(i)] + (j - degree_start(1)))];
    }

    // Graft of >= 2 non-unit trees under one root.
    int graft(std::span<const int> kids) const {
        if (kids.size() == 2) return graft2(kids[0], kids[1]);
        int d = 0;
        for (int k : kids) d += degree(k);
        if (d > max_degree_) return -1;
        thread_local std::string code;
        code.assign(1, static_cast<char>(kids.size()));
        for (int k : kids) code += tree(k).code();
        return find(code);
    }

private:
    void build_binary_table() {
        row_offset_.assign(trees_.size(), -1);
        int offset = 0;
        for (int i = degree_start(1); i < size(); ++i) {
            const int room = max_degree_ - degree(i);
            if (room < 1) continue;
            row_offset_[static_cast<std::size_t>(i)] = offset;
            const int row_end = degree_start(room + 1);
            for (int j = degree_start(1); j < row_end; ++j) {
                const std::string code = std::string(1, '\2') + tree(i).code() + tree(j).code();
                binary_.push_back(find(code));
            }
            offset += row_end - degree_start(1);
        }
    }

    int max_degree_;
    std::vector<PlanarMonomial> trees_;
    std::vector<int> degrees_;
    std::vector<int> degree_start_;
    std::unordered_map<std::string_view, int> lookup_;  // views into trees_
    std::vector<int> row_offset_;
    std::vector<int> binary_;
};

struct ProfileEntry {
    int index;            // into the TreeIndex
    std::uint64_t count;  // planar binomial coefficient (U/T)
};
using Profile = std::vector<ProfileEntry>;

// Computes contraction profiles against a TreeIndex. Not thread-safe: each
// thread should own its profiler (they are cheap; the index is shared).
class ContractionProfiler {
public:
    explicit ContractionProfiler(std::shared_ptr<const TreeIndex> index, int memo_max_degree = 11)
        : index_(std::move(index)), memo_max_degree_(memo_max_degree) {
        scratch_.assign(static_cast<std::size_t>(index_->size()), 0);
    }

    const TreeIndex& index() const { return *index_; }

    // Entries sorted by index; only nonzero counts.
    Profile profile(const PlanarMonomial& u) {
        Profile slot;
        return get(u.code(), slot);
    }

    // Profile of a subtree code, served from the memo when possible. The
    // result refers either to the memo or to `slot`.
    const Profile& view(std::string_view code, Profile& slot) { return get(code, slot); }

    // Calls sink(target_index, count) for the contractions of u. A target may
    // be reported more than once; the counts add up to the profile.
    template <typename Sink>
    void visit(const PlanarMonomial& u, Sink&& sink) {
        const std::string_view code = u.code();
        if (code.size() <= 1 || u.degree() <= memo_max_degree_) {
            Profile slot;
            for (const auto& e : get(code, slot)) sink(e.index, e.count);
            return;
        }
        std::vector<Profile> owned;
        std::vector<const Profile*> kids;
        children_of(code, owned, kids);
        graft(kids, sink);
    }

private:
    // Unit and leaf profiles.
    static const Profile& unit_profile() {
        static const Profile p{{0, 1}};
        return p;
    }
    static const Profile& leaf_profile() {
        static const Profile p{{0, 1}, {1, 1}};
        return p;
    }

    static std::size_t subtree_end(std::string_view code, std::size_t pos) {
        int open = 1;
        while (open > 0) {
            open += static_cast<unsigned char>(code[pos++]) - 1;
        }
        return pos;
    }

    void children_of(std::string_view code, std::vector<Profile>& owned, std::vector<const Profile*>& kids) {
        const int arity = static_cast<unsigned char>(code[0]);
        owned.resize(static_cast<std::size_t>(arity));
        kids.reserve(static_cast<std::size_t>(arity));
        std::size_t pos = 1;
        for (int i = 0; i < arity; ++i) {
            const std::size_t end = subtree_end(code, pos);
            kids.push_back(&get(code.substr(pos, end - pos), owned[static_cast<std::size_t>(i)]));
            pos = end;
        }
    }

    // The profile of `code`, either from the memo or computed into `slot`.
    const Profile& get(std::string_view code, Profile& slot) {
        if (code.empty()) return unit_profile();
        if (code.size() == 1) return leaf_profile();
        const bool memoize = count_leaves(code) <= memo_max_degree_;
        if (memoize) {
            if (auto it = memo_.find(code); it != memo_.end()) return it->second;
        }
        // Child buffers per recursion depth, reused across calls.
        if (frames_.size() <= depth_) frames_.emplace_back();
        Frame& frame = frames_[depth_];
        frame.kids.clear();
        ++depth_;
        children_of(code, frame.owned, frame.kids);
        --depth_;
        graft(frame.kids, [this](int t, std::uint64_t c) { bump(t, c); });
        if (!memoize) {
            collect_into(slot);
            return slot;
        }
        const std::string& key = keys_.emplace_back(code);
        Profile fresh;
        collect_into(fresh);
        return memo_.emplace(std::string_view(key), std::move(fresh)).first->second;
    }

    static int count_leaves(std::string_view code) {
        int n = 0;
        for (char c : code) n += (c == '\0');
        return n;
    }

    template <typename Sink>
    void graft(const std::vector<const Profile*>& kids, Sink&& sink) {
        if (kids.size() == 2) {
            graft_pair(*kids[0], *kids[1], sink);
        } else {
            std::vector<int> chosen;
            chosen.reserve(kids.size());
            graft_rec(kids, 0, 0, 1, chosen, sink);
        }
    }

    template <typename Sink>
    void graft_pair(const Profile& left, const Profile& right, Sink& sink) {
        const TreeIndex& idx = *index_;
        const int max_d = idx.max_degree();
        for (const auto& l : left) {
            const int dl = idx.degree(l.index);
            for (const auto& r : right) {
                const int dr = idx.degree(r.index);
                if (dl + dr > max_d) break;  // entries are sorted by degree
                int target;
                if (dl == 0) {
                    target = r.index;
                } else if (dr == 0) {
                    target = l.index;
                } else {
                    target = idx.graft2(l.index, r.index);
                }
                sink(target, l.count * r.count);
            }
        }
    }

    template <typename Sink>
    void graft_rec(const std::vector<const Profile*>& kids, std::size_t k, int deg, std::uint64_t weight,
                   std::vector<int>& chosen, Sink& sink) {
        const TreeIndex& idx = *index_;
        if (k == kids.size()) {
            int target = 0;
            if (chosen.size() == 1) {
                target = chosen[0];
            } else if (chosen.size() >= 2) {
                target = idx.graft(chosen);
            }
            sink(target, weight);
            return;
        }
        for (const auto& e : *kids[k]) {
            const int d = idx.degree(e.index);
            if (deg + d > idx.max_degree()) break;
            if (d > 0) chosen.push_back(e.index);
            graft_rec(kids, k + 1, deg + d, weight * e.count, chosen, sink);
            if (d > 0) chosen.pop_back();
        }
    }

    void bump(int target, std::uint64_t amount) {
        auto& slot = scratch_[static_cast<std::size_t>(target)];
        if (slot == 0) touched_.push_back(target);
        slot += amount;
    }

    void collect_into(Profile& out) {
        std::sort(touched_.begin(), touched_.end());
        out.clear();
        out.reserve(touched_.size());
        for (int t : touched_) {
            out.push_back({t, scratch_[static_cast<std::size_t>(t)]});
            scratch_[static_cast<std::size_t>(t)] = 0;
        }
        touched_.clear();
    }

    struct Frame {
        std::vector<Profile> owned;
        std::vector<const Profile*> kids;
    };

    std::shared_ptr<const TreeIndex> index_;
    int memo_max_degree_;
    std::deque<std::string> keys_;  // owns the memo keys
    std::unordered_map<std::string_view, Profile> memo_;
    std::vector<std::uint64_t> scratch_;
    std::vector<int> touched_;
    std::deque<Frame> frames_;  // stable addresses while deeper frames are added
    std::size_t depth_ = 0;
};

}  // namespace planar
