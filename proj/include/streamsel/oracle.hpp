#pragma once

// Offline ground truth: exact alpha, the balanced segment tree over {1..n}, and the
// per-segment quantities (beta, gamma, relevance) the estimators approximate.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "errors.hpp"
#include "interval.hpp"
#include "selector_general.hpp"

namespace streamsel {

// ---------------------------------------------------------------------------
// Exact alpha
// ---------------------------------------------------------------------------

/// Earliest-finish greedy on right position codes.
inline std::size_t alpha(std::span<const Interval> ivs) {
    std::vector<Interval> sorted(ivs.begin(), ivs.end());
    std::sort(sorted.begin(), sorted.end(),
              [](const Interval& a, const Interval& b) { return a.rcode() < b.rcode(); });
    std::size_t count = 0;
    Code last = kMinusInfinity;
    for (const auto& iv : sorted) {
        if (iv.lcode() > last) {
            ++count;
            last = iv.rcode();
        }
    }
    return count;
}

inline std::size_t alpha(const Instance& inst) { return alpha(std::span<const Interval>(inst.intervals)); }

inline constexpr std::size_t kBruteAlphaLimit = 24;

/// Maximum independent set of the conflict graph by exhaustive branching.
inline std::size_t brute_alpha(std::span<const Interval> ivs) {
    if (ivs.size() > kBruteAlphaLimit)
        throw SizeError("brute_alpha supports at most " + std::to_string(kBruteAlphaLimit) + " intervals");
    const std::size_t m = ivs.size();
    std::vector<std::uint32_t> conflict(m, 0);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            if (i != j && intersects(ivs[i], ivs[j])) conflict[i] |= 1u << j;

    std::function<std::size_t(std::uint32_t)> best = [&](std::uint32_t cand) -> std::size_t {
        if (cand == 0) return 0;
        const int v = std::countr_zero(cand);
        const std::uint32_t bit = 1u << v;
        const std::size_t take = 1 + best(cand & ~bit & ~conflict[v]);
        if ((cand & conflict[v]) == 0) return take; // v conflicts with nothing left
        return std::max(take, best(cand & ~bit));
    };
    const std::uint32_t all = m == 32 ? ~0u : ((1u << m) - 1);
    return best(all);
}

inline std::size_t brute_alpha(const Instance& inst) {
    return brute_alpha(std::span<const Interval>(inst.intervals));
}

// ---------------------------------------------------------------------------
// Segment tree
// ---------------------------------------------------------------------------

/// Half-open segment [lo, hi).
struct Segment {
    Coord lo = 1;
    Coord hi = 2;

    Coord width() const noexcept { return hi - lo; }
    bool contains(const Interval& iv) const noexcept {
        return 2 * lo <= iv.lcode() && iv.rcode() <= 2 * hi - 1;
    }
    Window as_window() const noexcept { return half_open_window(lo, hi); }
    std::string to_string() const { return "[" + std::to_string(lo) + "," + std::to_string(hi) + ")"; }

    friend constexpr bool operator==(const Segment&, const Segment&) = default;
};

/// Perfectly balanced segment tree over the elementary segments [i, i+1),
/// i = 1..n_pow2, with nodes in heap order (root 1, children 2v and 2v+1).
class SegmentTree {
public:
    using Node = std::uint64_t;

    explicit SegmentTree(Coord n) {
        if (n < 1) throw ParameterError("segment tree needs n >= 1");
        n_pow2_ = std::bit_ceil(static_cast<std::uint64_t>(n));
        depth_ = std::countr_zero(n_pow2_);
    }

    std::uint64_t n_pow2() const noexcept { return n_pow2_; }
    /// Height of the tree, log2(n_pow2).
    int depth() const noexcept { return depth_; }
    /// The ceil(log n) used by thresholds and sample counts. At least 1.
    int log_n() const noexcept { return std::max(depth_, 1); }
    std::uint64_t node_count() const noexcept { return 2 * n_pow2_ - 1; }

    static constexpr Node root() noexcept { return 1; }
    static constexpr Node parent(Node v) noexcept { return v >> 1; }
    static constexpr Node left_child(Node v) noexcept { return 2 * v; }
    static constexpr Node right_child(Node v) noexcept { return 2 * v + 1; }
    static int level(Node v) noexcept { return std::bit_width(v) - 1; }

    bool is_leaf(Node v) const noexcept { return v >= n_pow2_; }
    bool valid(Node v) const noexcept { return v >= 1 && v < 2 * n_pow2_; }

    Segment segment(Node v) const noexcept {
        const int d = level(v);
        const auto width = static_cast<Coord>(n_pow2_ >> d);
        const auto offset = static_cast<Coord>(v - (Node{1} << d));
        return Segment{1 + offset * width, 1 + (offset + 1) * width};
    }

    /// Node whose segment is s. Throws if s is not a tree segment.
    Node node(const Segment& s) const {
        const Coord w = s.width();
        if (w <= 0 || !std::has_single_bit(static_cast<std::uint64_t>(w)) ||
            static_cast<std::uint64_t>(w) > n_pow2_ || s.lo < 1 || (s.lo - 1) % w != 0 ||
            static_cast<std::uint64_t>(s.hi) > n_pow2_ + 1)
            throw DomainError("segment " + s.to_string() + " is not a tree segment");
        const int d = depth_ - std::countr_zero(static_cast<std::uint64_t>(w));
        return (Node{1} << d) + static_cast<Node>((s.lo - 1) / w);
    }

    bool contains(Node v, const Interval& iv) const noexcept { return segment(v).contains(iv); }

    /// Deepest node whose segment contains iv. Endpoints must lie in [1, n_pow2].
    Node smallest_containing(const Interval& iv) const noexcept {
        Node a = n_pow2_ + static_cast<Node>(iv.lcode() / 2 - 1);
        Node b = n_pow2_ + static_cast<Node>(iv.rcode() / 2 - 1);
        while (a != b) {
            a >>= 1;
            b >>= 1;
        }
        return a;
    }

    bool is_ancestor_or_self(Node anc, Node v) const noexcept {
        const int da = level(anc);
        const int dv = level(v);
        return dv >= da && (v >> (dv - da)) == anc;
    }

    /// Injective id b(S) = n_pow2 (lo - 1) + (hi - 1), in [1, n_pow2^2].
    std::uint64_t segment_id(Node v) const noexcept {
        const Segment s = segment(v);
        return n_pow2_ * static_cast<std::uint64_t>(s.lo - 1) + static_cast<std::uint64_t>(s.hi - 1);
    }
    std::uint64_t id_universe() const noexcept { return n_pow2_ * n_pow2_; }

    /// Segments made active by iv, non-increasing in size: the root, then both
    /// children of every non-leaf node whose segment contains iv.
    template <class F>
    void for_each_active(const Interval& iv, F&& emit) const {
        emit(root());
        const Node s = smallest_containing(iv);
        const int ds = level(s);
        for (int d = 0; d <= ds; ++d) {
            const Node v = s >> (ds - d);
            if (is_leaf(v)) break;
            emit(left_child(v));
            emit(right_child(v));
        }
    }

private:
    std::uint64_t n_pow2_ = 1;
    int depth_ = 0;
};

/// Integer relevance threshold ceil(2 ceil(log n)^2 / eps).
inline std::uint64_t relevance_cap(const SegmentTree& tree, double eps) {
    const long double l = tree.log_n();
    const long double x = 2.0L * l * l / eps;
    const long double r = std::nearbyint(x);
    if (std::fabs(x - r) <= 1e-9L * x) return static_cast<std::uint64_t>(r);
    return static_cast<std::uint64_t>(std::ceil(x));
}

// ---------------------------------------------------------------------------
// beta / gamma
// ---------------------------------------------------------------------------

inline std::vector<Interval> intervals_inside(const Instance& inst, const Segment& s) {
    std::vector<Interval> out;
    for (const auto& iv : inst.intervals)
        if (s.contains(iv)) out.push_back(iv);
    return out;
}

/// Exact optimum among the intervals contained in s.
inline std::size_t beta(const Instance& inst, const Segment& s) {
    return alpha(std::span<const Interval>(intervals_inside(inst, s)));
}

/// Size of the 2-approximate solution on the subsequence of intervals contained in s.
inline std::size_t beta_hat(const Instance& inst, const Segment& s) {
    GeneralSelector sel;
    for (const auto& iv : inst.intervals)
        if (s.contains(iv)) sel.process(iv);
    return sel.window_count();
}

/// Number of tree segments inside s that contain at least one input interval,
/// by a full traversal of the subtree of s.
inline std::size_t gamma(const Instance& inst, const Segment& s) {
    const SegmentTree tree(inst.n);
    const auto top = tree.node(s);
    std::vector<char> marked(2 * tree.n_pow2(), 0);
    for (const auto& iv : inst.intervals) marked[tree.smallest_containing(iv)] = 1;

    std::size_t count = 0;
    std::function<bool(SegmentTree::Node)> visit = [&](SegmentTree::Node v) -> bool {
        bool has = marked[v] != 0;
        if (!tree.is_leaf(v)) {
            const bool l = visit(SegmentTree::left_child(v));
            const bool r = visit(SegmentTree::right_child(v));
            has = has || l || r;
        }
        if (has) ++count;
        return has;
    };
    visit(top);
    return count;
}

/// gamma for every segment at once. Segments containing some interval are closed
/// under taking ancestors, so gamma(v) counts such nodes in v's subtree and is zero
/// for everything else.
class GammaTable {
public:
    explicit GammaTable(const Instance& inst) : tree_(inst.n) {
        std::vector<SegmentTree::Node> occupied;
        for (const auto& iv : inst.intervals) {
            for (auto v = tree_.smallest_containing(iv); v >= 1; v = SegmentTree::parent(v)) {
                auto [it, fresh] = gamma_.try_emplace(v, 0);
                if (!fresh) break;
                occupied.push_back(v);
            }
        }
        for (auto v : occupied)
            for (auto u = v; u >= 1; u = SegmentTree::parent(u)) ++gamma_[u];
    }

    std::size_t gamma(SegmentTree::Node v) const {
        auto it = gamma_.find(v);
        return it == gamma_.end() ? 0 : it->second;
    }

    /// Nodes with gamma >= 1, ascending.
    std::vector<SegmentTree::Node> occupied() const {
        std::vector<SegmentTree::Node> out;
        out.reserve(gamma_.size());
        for (const auto& [v, g] : gamma_) out.push_back(v);
        std::sort(out.begin(), out.end());
        return out;
    }

    /// Root plus both children of every occupied non-leaf node.
    std::vector<SegmentTree::Node> active() const {
        std::vector<SegmentTree::Node> out{SegmentTree::root()};
        for (auto v : occupied())
            if (!tree_.is_leaf(v)) {
                out.push_back(SegmentTree::left_child(v));
                out.push_back(SegmentTree::right_child(v));
            }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    const SegmentTree& tree() const noexcept { return tree_; }

private:
    SegmentTree tree_;
    std::unordered_map<SegmentTree::Node, std::size_t> gamma_;
};

inline void check_eps(double eps) {
    if (!(eps > 0.0 && eps < 0.5)) throw ParameterError("eps must lie in (0, 1/2)");
}

/// Relevant nodes: non-root segments with gamma(parent) >= cap and
/// 1 <= gamma < cap. Falls back to {root} when there are none.
inline std::vector<SegmentTree::Node> relevant_nodes(const GammaTable& table, double eps) {
    check_eps(eps);
    const auto cap = relevance_cap(table.tree(), eps);
    std::vector<SegmentTree::Node> out;
    for (auto v : table.occupied()) {
        if (v == SegmentTree::root()) continue;
        const auto g = table.gamma(v);
        if (g >= 1 && g < cap && table.gamma(SegmentTree::parent(v)) >= cap) out.push_back(v);
    }
    if (out.empty()) out.push_back(SegmentTree::root());
    return out;
}

inline std::vector<Segment> relevant_segments(const Instance& inst, double eps) {
    const GammaTable table(inst);
    std::vector<Segment> out;
    for (auto v : relevant_nodes(table, eps)) out.push_back(table.tree().segment(v));
    std::sort(out.begin(), out.end(), [](const Segment& a, const Segment& b) {
        return a.lo != b.lo ? a.lo < b.lo : a.hi > b.hi;
    });
    return out;
}

/// Sum of beta_hat over the relevant segments.
inline std::size_t relevant_sum(const Instance& inst, double eps) {
    std::size_t total = 0;
    for (const auto& s : relevant_segments(inst, eps)) total += beta_hat(inst, s);
    return total;
}

} // namespace streamsel
