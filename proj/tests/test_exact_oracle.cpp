#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "streamsel/streamsel.hpp"
#include "test_util.hpp"

using namespace streamsel;

namespace {

Instance make(Coord n, std::vector<Interval> ivs) {
    Instance inst;
    inst.n = n;
    inst.intervals = std::move(ivs);
    return inst;
}

/// Deepest node containing iv, by scanning all nodes.
SegmentTree::Node scan_smallest(const SegmentTree& t, const Interval& iv) {
    SegmentTree::Node best = 1;
    for (SegmentTree::Node v = 1; v < 2 * t.n_pow2(); ++v)
        if (t.contains(v, iv) && SegmentTree::level(v) > SegmentTree::level(best)) best = v;
    return best;
}

/// Points with all leaves of [1, n] occupied by a zero-length interval, plus noise.
Instance saturated_instance(Coord n, std::size_t noise, u64 seed) {
    Instance inst = gen_mixed(n, noise, n / 8, seed);
    for (Coord i = 1; i <= n; ++i) inst.intervals.push_back(Interval::closed_at(i, i));
    return inst;
}

} // namespace

TEST(Alpha, Examples) {
    EXPECT_EQ(alpha(make(5, {})), 0u);
    EXPECT_EQ(alpha(make(5, {Interval::closed_at(1, 3)})), 1u);
    const auto four = make(9, {Interval::closed_at(1, 3), Interval::closed_at(2, 5), Interval::closed_at(4, 7),
                               Interval::closed_at(6, 9)});
    EXPECT_EQ(alpha(four), 2u);
    EXPECT_EQ(brute_alpha(four), 2u);
}

TEST(BruteAlpha, Examples) {
    EXPECT_EQ(brute_alpha(make(1, {Interval::closed_at(1, 1), Interval::closed_at(1, 1)})), 1u);
    EXPECT_EQ(brute_alpha(make(8, {Interval::closed_at(1, 2), Interval::closed_at(4, 5), Interval::closed_at(7, 8)})), 3u);
    Instance big = gen_uniform(100, 25, 10, 1);
    EXPECT_THROW(brute_alpha(big), SizeError);
}

TEST(BruteAlpha, AgreesWithGreedyOnRandomInstances) {
    for (u64 seed = 0; seed < 400; ++seed) {
        const std::size_t count = 1 + seed % 16;
        const Instance inst = gen_mixed(20, count, 8, seed);
        ASSERT_EQ(brute_alpha(inst), alpha(inst)) << format_stream(inst);
    }
}

TEST(Alpha, AgreesWithDynamicProgramming) {
    for (u64 seed = 0; seed < 100; ++seed) {
        const Instance inst = gen_mixed(40, 40, 12, 1000 + seed);
        ASSERT_EQ(testutil::dp_alpha(inst.intervals, inst.n), alpha(inst)) << format_stream(inst);
    }
}

TEST(SegmentTreeModel, ShapeAndRounding) {
    const SegmentTree t4(4);
    EXPECT_EQ(t4.n_pow2(), 4u);
    EXPECT_EQ(t4.node_count(), 7u);
    EXPECT_EQ(t4.segment(1), (Segment{1, 5}));
    EXPECT_EQ(t4.segment(2), (Segment{1, 3}));
    EXPECT_EQ(t4.segment(7), (Segment{4, 5}));

    const SegmentTree t5(5);
    EXPECT_EQ(t5.n_pow2(), 8u);
    EXPECT_EQ(t5.depth(), 3);
    EXPECT_EQ(SegmentTree(1).log_n(), 1);
    EXPECT_THROW(SegmentTree(0), ParameterError);
}

TEST(SegmentTreeModel, ChildrenPartitionParentAndNodeInverts) {
    const SegmentTree t(32);
    for (SegmentTree::Node v = 1; v < 2 * t.n_pow2(); ++v) {
        const Segment s = t.segment(v);
        EXPECT_TRUE(std::has_single_bit(static_cast<u64>(s.width())));
        EXPECT_EQ(t.node(s), v);
        if (!t.is_leaf(v)) {
            const Segment l = t.segment(SegmentTree::left_child(v));
            const Segment r = t.segment(SegmentTree::right_child(v));
            EXPECT_EQ(l.lo, s.lo);
            EXPECT_EQ(l.hi, r.lo);
            EXPECT_EQ(r.hi, s.hi);
        }
    }
    EXPECT_THROW(t.node(Segment{2, 4}), DomainError);
    EXPECT_THROW(t.node(Segment{1, 4}), DomainError);
}

TEST(SegmentTreeModel, SmallestContainingMatchesScan) {
    const SegmentTree t(16);
    for (const auto& iv : testutil::all_intervals(16)) ASSERT_EQ(t.smallest_containing(iv), scan_smallest(t, iv)) << to_string(iv);
}

TEST(Beta, Examples) {
    const auto inst = make(4, {Interval::closed_at(1, 2), Interval::closed_at(2, 3)});
    EXPECT_EQ(beta(inst, Segment{1, 3}), 1u);
    EXPECT_EQ(beta(inst, Segment{3, 4}), 0u);
    const Instance rnd = gen_mixed(50, 60, 10, 3);
    EXPECT_EQ(beta(rnd, SegmentTree(50).segment(1)), alpha(rnd));
}

TEST(Gamma, Examples) {
    const auto inst = make(4, {Interval::closed_at(1, 2)});
    EXPECT_EQ(gamma(inst, Segment{1, 5}), 2u);
    EXPECT_EQ(gamma(inst, Segment{1, 3}), 1u);
    EXPECT_EQ(gamma(inst, Segment{1, 2}), 0u);
    const auto empty = make(8, {});
    const SegmentTree t(8);
    for (SegmentTree::Node v = 1; v < 16; ++v) EXPECT_EQ(gamma(empty, t.segment(v)), 0u);
}

TEST(Gamma, TableAgreesWithTraversal) {
    for (u64 seed = 0; seed < 20; ++seed) {
        const Instance inst = gen_mixed(64, 30, 20, seed);
        const GammaTable table(inst);
        const auto& t = table.tree();
        for (SegmentTree::Node v = 1; v < 2 * t.n_pow2(); ++v)
            ASSERT_EQ(table.gamma(v), gamma(inst, t.segment(v)));
    }
}

TEST(Gamma, StructuralBounds) {
    for (u64 seed = 0; seed < 30; ++seed) {
        const Instance inst = gen_mixed(64, 40, 1 + seed % 30, 500 + seed);
        const GammaTable table(inst);
        const auto& t = table.tree();
        bool leaf_contained = false;
        for (const auto& iv : inst.intervals) leaf_contained |= t.is_leaf(t.smallest_containing(iv));
        for (SegmentTree::Node v = 1; v < 2 * t.n_pow2(); ++v) {
            const auto g = table.gamma(v);
            const auto b = beta(inst, t.segment(v));
            // a leaf can hold the disjoint pair [x,x] and (x,x+1)
            EXPECT_GE(2 * g, b);
            // An interval inside a leaf segment makes every node above it occupied:
            // depth + 1 nodes for a single unit of beta.
            EXPECT_LE(g, b * static_cast<std::size_t>(t.log_n() + 1));
            if (!leaf_contained) { EXPECT_LE(g, b * static_cast<std::size_t>(t.log_n())); }
            if (v > 1) { EXPECT_LE(g, table.gamma(SegmentTree::parent(v))); }
        }
    }
}

TEST(Gamma, ClosedInstancesHaveGammaAtLeastBeta) {
    for (u64 seed = 0; seed < 30; ++seed) {
        const Instance inst = gen_uniform(64, 40, 1 + seed % 30, 900 + seed);
        const GammaTable table(inst);
        for (SegmentTree::Node v = 1; v < 2 * table.tree().n_pow2(); ++v)
            EXPECT_GE(table.gamma(v), beta(inst, table.tree().segment(v)));
    }
}

TEST(Gamma, OpenIntervalsShareALeaf) {
    const auto inst = make(4, {Interval::closed_at(2, 2), Interval::open_at(2, 3)});
    const GammaTable table(inst);
    const auto leaf = table.tree().node(Segment{2, 3});
    EXPECT_EQ(beta(inst, Segment{2, 3}), 2u);
    EXPECT_EQ(table.gamma(leaf), 1u);
}

TEST(Gamma, ZeroLengthIntervalExceedsBetaTimesLog) {
    // [1,1] at n = 16 lies in a leaf: gamma(root) = 5 > beta * log2(16) = 4.
    const auto inst = make(16, {Interval::closed_at(1, 1)});
    EXPECT_EQ(gamma(inst, Segment{1, 17}), 5u);
    EXPECT_EQ(beta(inst, Segment{1, 17}), 1u);
}

TEST(Relevance, CapArithmetic) {
    EXPECT_EQ(relevance_cap(SegmentTree(16), 0.05), 640u);
    EXPECT_EQ(relevance_cap(SegmentTree(256), 0.45), 285u);
    EXPECT_EQ(relevance_cap(SegmentTree(1024), 0.075), 2667u);
    EXPECT_EQ(relevance_cap(SegmentTree(4096), 0.075), 3840u);
    EXPECT_EQ(relevance_cap(SegmentTree(4096), 0.25), 1152u);
}

TEST(Relevance, FallbackToRoot) {
    const auto tiny = make(16, {Interval::closed_at(2, 3), Interval::closed_at(5, 9)});
    auto rel = relevant_segments(tiny, 0.25);
    ASSERT_EQ(rel.size(), 1u);
    EXPECT_EQ(rel[0], (Segment{1, 17}));
    rel = relevant_segments(make(16, {}), 0.25);
    ASSERT_EQ(rel.size(), 1u);
    EXPECT_EQ(rel[0], (Segment{1, 17}));
    EXPECT_THROW(relevant_segments(tiny, 0.5), ParameterError);
}

TEST(Relevance, SaturatedInstanceSatisfiesBothInequalities) {
    const Instance inst = saturated_instance(256, 200, 9);
    const double eps = 0.45;
    const SegmentTree t(inst.n);
    const auto cap = relevance_cap(t, eps);
    ASSERT_GE(gamma(inst, t.segment(1)), cap);
    const auto rel = relevant_segments(inst, eps);
    ASSERT_FALSE(rel.empty());
    for (const auto& s : rel) {
        const auto v = t.node(s);
        ASSERT_NE(v, SegmentTree::root());
        const auto g = gamma(inst, s);
        EXPECT_GE(g, 1u);
        EXPECT_LT(g, cap);
        EXPECT_GE(gamma(inst, t.segment(SegmentTree::parent(v))), cap);
    }

    // Relevant segments plus the gamma = 0 children of saturated nodes cover every
    // leaf exactly once.
    const GammaTable table(inst);
    std::set<SegmentTree::Node> cover;
    for (SegmentTree::Node v = 2; v < 2 * t.n_pow2(); ++v)
        if (table.gamma(SegmentTree::parent(v)) >= cap && table.gamma(v) < cap) cover.insert(v);
    for (const auto& s : rel) EXPECT_TRUE(cover.count(t.node(s)));
    for (SegmentTree::Node leaf = t.n_pow2(); leaf < 2 * t.n_pow2(); ++leaf) {
        int hits = 0;
        for (auto v = leaf; v >= 1; v = SegmentTree::parent(v)) hits += cover.count(v) ? 1 : 0;
        EXPECT_EQ(hits, 1) << leaf;
    }
}

TEST(RelevantSum, Examples) {
    const auto single = make(30, {Interval::closed_at(4, 9)});
    EXPECT_EQ(relevant_sum(single, 0.25), 1u);

    const Instance rnd = gen_uniform(100, 200, 15, 21);
    GeneralSelector sel;
    for (const auto& iv : rnd.intervals) sel.process(iv);
    EXPECT_EQ(relevant_sum(rnd, 0.25), sel.window_count());
    const double a = static_cast<double>(alpha(rnd));
    EXPECT_LE(relevant_sum(rnd, 0.25), alpha(rnd));
    EXPECT_GE(static_cast<double>(relevant_sum(rnd, 0.25)), (0.5 - 0.25) * a);
}

TEST(RelevantSum, BracketOnSaturatedInstances) {
    for (u64 seed = 0; seed < 10; ++seed) {
        const Instance inst = saturated_instance(256, 300, 40 + seed);
        for (double eps : {0.3, 0.45}) {
            const double a = static_cast<double>(alpha(inst));
            const auto sum = static_cast<double>(relevant_sum(inst, eps));
            EXPECT_LE(sum, a);
            EXPECT_GE(sum, (0.5 - eps) * a);
        }
    }
}
