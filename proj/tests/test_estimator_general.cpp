#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "streamsel/streamsel.hpp"
#include "test_util.hpp"

using namespace streamsel;

namespace {

Instance saturated_instance(Coord n, std::size_t noise, u64 seed) {
    Instance inst = gen_mixed(n, noise, n / 8, seed);
    for (Coord i = 1; i <= n; ++i) inst.intervals.push_back(Interval::closed_at(i, i));
    return inst;
}

EstimatorConfig config(Coord n, double eps, u64 seed, double scale) {
    EstimatorConfig cfg;
    cfg.n = n;
    cfg.user_eps = eps;
    cfg.seed = seed;
    cfg.scale = scale;
    return cfg;
}

/// Active segments by definition: the root and every child of a segment that
/// contains some interval.
std::set<SegmentTree::Node> brute_active(const SegmentTree& t, const std::vector<Interval>& ivs) {
    std::set<SegmentTree::Node> out{SegmentTree::root()};
    for (SegmentTree::Node v = 1; v < t.n_pow2(); ++v)
        for (const auto& iv : ivs)
            if (t.contains(v, iv)) {
                out.insert(2 * v);
                out.insert(2 * v + 1);
                break;
            }
    return out;
}

} // namespace

TEST(SegmentId, Examples) {
    const SegmentTree t(16);
    EXPECT_EQ(t.segment_id(t.node(Segment{1, 2})), 1u);
    EXPECT_EQ(t.segment_id(SegmentTree::root()), 16u);
    std::set<u64> ids;
    for (SegmentTree::Node v = 1; v < 32; ++v) {
        const u64 id = t.segment_id(v);
        EXPECT_GE(id, 1u);
        EXPECT_LE(id, t.id_universe());
        ids.insert(id);
    }
    EXPECT_EQ(ids.size(), 31u);
}

TEST(ActiveSegments, Examples) {
    const ActiveSegmentEnumerator e(4);
    EXPECT_EQ(e.segments(Interval::closed_at(1, 2)),
              (std::vector<Segment>{{1, 5}, {1, 3}, {3, 5}, {1, 2}, {2, 3}}));
    EXPECT_EQ(e.segments(Interval::closed_at(2, 3)), (std::vector<Segment>{{1, 5}, {1, 3}, {3, 5}}));
}

TEST(ActiveSegments, ExhaustiveAtSixteen) {
    const ActiveSegmentEnumerator e(16);
    const auto& t = e.tree();
    for (const auto& iv : testutil::all_intervals(16)) {
        const auto nodes = e.nodes(iv);
        ASSERT_LE(nodes.size(), 2u * 4 + 1);
        ASSERT_EQ(nodes.front(), SegmentTree::root());
        for (std::size_t i = 1; i < nodes.size(); ++i) {
            ASSERT_GE(t.segment(nodes[i - 1]).width(), t.segment(nodes[i]).width());
            ASSERT_TRUE(t.contains(SegmentTree::parent(nodes[i]), iv));
        }
        const std::set<SegmentTree::Node> got(nodes.begin(), nodes.end());
        ASSERT_EQ(got.size(), nodes.size());
        ASSERT_EQ(got, brute_active(t, {iv})) << to_string(iv);
    }
}

/// Ceiling that ignores relative rounding noise below 1e-9.
std::size_t noisy_ceil(long double x) {
    const long double r = std::round(x);
    return static_cast<std::size_t>(std::fabs(x - r) <= 1e-9L * x ? r : std::ceil(x));
}

TEST(Plan, SampleCountFormulas) {
    const auto cfg = config(1024, 0.2, 0, 1.0);
    const auto p = plan_general(cfg);
    const long double e1 = 0.2L / 6, er = e1 / 7, eh = e1 / 5;
    EXPECT_EQ(p.log_n, 10);
    EXPECT_EQ(p.cap, static_cast<u64>(std::ceil(2 * 100 / e1 - 1e-9)));
    EXPECT_EQ(p.k_rel, noisy_ceil(72 * 100 / (er * er * er * (1 - er))));
    EXPECT_EQ(p.k_rho, noisy_ceil(72 * 100 / (eh * eh * eh)));
    EXPECT_GT(p.k_rel, 100000000u);
    EXPECT_THROW(GeneralEstimator{cfg}, SizeError);
    EXPECT_THROW(plan_general(config(16, 0.5, 0, 1.0)), ParameterError);
    EXPECT_THROW(plan_general(config(16, 0.2, 0, 0.0)), ParameterError);
}

TEST(GeneralEstimatorTest, EmptyStream) {
    GeneralEstimator est(config(64, 0.3, 1, 1e-6));
    const auto e = est.estimate();
    EXPECT_EQ(e.value, 0.0);
}

TEST(GeneralEstimatorTest, FallbackAtSmallN) {
    const Instance inst = gen_uniform(16, 40, 6, 4);
    GeneralEstimator est(config(16, 0.3, 2, 1e-5));
    EXPECT_GT(est.plan().cap, 31u);
    GeneralSelector sel;
    for (const auto& iv : inst.intervals) {
        est.process(iv);
        sel.process(iv);
    }
    const auto e = est.estimate();
    EXPECT_TRUE(e.fallback);
    EXPECT_EQ(e.value, static_cast<double>(sel.window_count()));
}

TEST(GeneralEstimatorTest, RejectsOutOfRange) {
    GeneralEstimator est(config(16, 0.3, 2, 1e-5));
    EXPECT_THROW(est.process(Interval::closed_at(3, 17)), InputError);
}

TEST(GeneralEstimatorTest, DistinctActiveCountIsExact) {
    const Instance inst = gen_mixed(128, 80, 30, 8);
    GeneralEstimator est(config(128, 0.3, 3, 1e-6));
    std::set<u64> ids;
    for (const auto& iv : inst.intervals) {
        est.process(iv);
        for (auto v : ActiveSegmentEnumerator(128).nodes(iv)) ids.insert(est.tree().segment_id(v));
    }
    EXPECT_EQ(est.counter().estimate(), static_cast<double>(ids.size()));
    EXPECT_EQ(ids.size(), brute_active(est.tree(), inst.intervals).size());
    const double before = est.counter().estimate();
    est.process(inst.intervals.front());
    EXPECT_EQ(est.counter().estimate(), before);
}

TEST(GeneralEstimatorTest, ReplayChecksOnSaturatedInstance) {
    // n = 2048 is the smallest tree whose root can reach the threshold at eps < 1/2.
    const Instance inst = saturated_instance(2048, 150, 12);
    auto cfg = config(2048, 0.45, 77, 1e-7);
    GeneralEstimator est(cfg);
    for (const auto& iv : inst.intervals) est.process(iv);
    const auto& t = est.tree();
    const GammaTable table(inst);
    const auto active = table.active();
    ASSERT_EQ(active.size(), brute_active(t, inst.intervals).size());
    ASSERT_TRUE(est.root_tracker().saturated());

    auto check_tracker = [&](const GammaTracker& g) {
        const auto exact = table.gamma(g.target());
        if (g.saturated()) {
            EXPECT_GE(exact, g.cap());
        } else {
            EXPECT_EQ(g.count(), exact);
            EXPECT_LT(exact, g.cap());
        }
    };
    auto true_min = [&](const MinWisePermutation& perm) {
        SegmentTree::Node best = 0;
        MinWisePermutation::Key best_key{};
        for (auto v : active) {
            const auto k = perm.key(t.segment_id(v));
            if (best == 0 || k < best_key) {
                best = v;
                best_key = k;
            }
        }
        return best;
    };

    const auto rel = relevant_nodes(table, cfg.eps1());
    ASSERT_NE(rel.front(), SegmentTree::root());
    for (const auto& s : est.rel_samples()) {
        ASSERT_EQ(s.winner, true_min(s.perm));
        const bool oracle_relevant = std::find(rel.begin(), rel.end(), s.winner) != rel.end();
        EXPECT_EQ(s.relevant(), oracle_relevant);
        check_tracker(s.own);
        if (s.winner != SegmentTree::root()) check_tracker(s.parent);
    }
    std::size_t relevant = 0;
    for (const auto& s : est.rho_samples()) {
        ASSERT_EQ(s.winner, true_min(s.perm));
        check_tracker(s.own);
        if (s.winner != SegmentTree::root()) check_tracker(s.parent);
        EXPECT_EQ(s.selector.window_count(), beta_hat(inst, t.segment(s.winner)));
        const bool oracle_relevant = std::find(rel.begin(), rel.end(), s.winner) != rel.end();
        EXPECT_EQ(s.relevant(), oracle_relevant);
        relevant += s.relevant() ? 1 : 0;
    }
    const auto e = est.estimate();
    EXPECT_FALSE(e.fallback);
    EXPECT_EQ(e.n_act, static_cast<double>(active.size()));
    EXPECT_EQ(e.rho_used, std::min(relevant, est.plan().k_rho));
}

TEST(GeneralEstimatorTest, SkipRepeatsChangesNothing) {
    const Instance inst = saturated_instance(2048, 100, 5);
    auto cfg = config(2048, 0.45, 9, 2e-8);
    GeneralEstimator plain(cfg);
    cfg.skip_repeats = true;
    GeneralEstimator fast(cfg);
    for (const auto& iv : inst.intervals) {
        plain.process(iv);
        fast.process(iv);
    }
    EXPECT_EQ(plain.estimate().value, fast.estimate().value);
    for (std::size_t i = 0; i < plain.rel_samples().size(); ++i)
        EXPECT_EQ(plain.rel_samples()[i].winner, fast.rel_samples()[i].winner);
}

TEST(GeneralEstimatorTest, SameSeedSameEstimate) {
    const Instance inst = saturated_instance(2048, 100, 6);
    const auto cfg = config(2048, 0.45, 31, 2e-8);
    GeneralEstimator a(cfg);
    GeneralEstimator b(cfg);
    for (const auto& iv : inst.intervals) {
        a.process(iv);
        b.process(iv);
    }
    EXPECT_EQ(a.estimate().value, b.estimate().value);
}

TEST(GeneralOracle, Examples) {
    Instance single;
    single.n = 40;
    single.intervals = {Interval::closed_at(3, 9)};
    EXPECT_EQ(estimate_general_oracle(single, 0.3), 1.0);

    const Instance small = gen_uniform(64, 50, 10, 2);
    EXPECT_EQ(estimate_general_oracle(small, 0.3), static_cast<double>(beta_hat(small, Segment{1, 65})));

    Instance empty;
    empty.n = 10;
    EXPECT_EQ(estimate_general_oracle(empty, 0.3), 0.0);
}

TEST(GeneralOracle, BracketOnRandomAndSaturatedInstances) {
    std::vector<Instance> cases{gen_uniform(1000, 300, 40, 3)};
    for (u64 seed = 0; seed < 5; ++seed) cases.push_back(saturated_instance(256, 300, seed));
    cases.push_back(saturated_instance(2048, 400, 1));
    cases.push_back(saturated_instance(4096, 400, 1));
    for (const auto& inst : cases) {
        const double eps = 0.45;
        const double e1 = eps / 6;
        const double a = static_cast<double>(alpha(inst));
        const double v = estimate_general_oracle(inst, eps);
        EXPECT_LE(v, a);
        EXPECT_GE(v, (0.5 - e1) / ((1 + e1) * (1 + e1)) * a);
    }
}

TEST(GeneralOracle, RootCannotSaturateAtTenTwentyFour) {
    // At n = 1024 and eps = 0.45 the threshold exceeds the number of segments.
    const SegmentTree t(1024);
    EXPECT_GT(relevance_cap(t, 0.45 / 6), t.node_count());
}
