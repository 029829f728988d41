#pragma once

// One-pass estimate of alpha for arbitrary intervals.
//
// Every interval activates O(log n) segment-tree segments. The estimate combines a
// distinct count of active segments, the fraction of min-wise sampled active
// segments that are relevant, and the mean beta-hat of sampled relevant segments.
// Each sampler keeps capped gamma counters for its current winner and the
// winner's parent, plus (for the rho samplers) a nested 2-approximation.

#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "errors.hpp"
#include "hashing.hpp"
#include "interval.hpp"
#include "oracle.hpp"
#include "selector_general.hpp"

namespace streamsel {

struct EstimatorConfig {
    Coord n = 1;
    double user_eps = 0.25;
    u64 seed = 0;
    CounterKind counter_kind = CounterKind::exact;
    double scale = 1.0;
    /// Skip sampler updates for a segment id already offered once. Output is
    /// identical (a repeat can never beat the current minimum) but it stores the
    /// set of seen ids, so it is off by default.
    bool skip_repeats = false;
    /// Refuse to build more samplers than this.
    std::size_t max_samplers = 20'000'000;

    double eps1() const noexcept { return user_eps / 6.0; }
    double eps_rel() const noexcept { return eps1() / 7.0; }
    double eps_rho() const noexcept { return eps1() / 5.0; }
};

/// Sample counts and thresholds implied by a config.
struct GeneralPlan {
    std::uint64_t n_pow2 = 1;
    int log_n = 1;
    std::uint64_t cap = 1;
    std::size_t k_rel = 1;
    std::size_t k_rho = 1;
    std::size_t k0 = 1;
};

inline GeneralPlan plan_general(const EstimatorConfig& cfg) {
    if (!(cfg.user_eps > 0.0 && cfg.user_eps < 0.5)) throw ParameterError("eps must lie in (0, 1/2)");
    if (cfg.n < 1) throw ParameterError("n must be >= 1");
    if (!(cfg.scale > 0.0)) throw ParameterError("scale must be positive");
    const SegmentTree tree(cfg.n);
    GeneralPlan p;
    p.n_pow2 = tree.n_pow2();
    p.log_n = tree.log_n();
    p.cap = relevance_cap(tree, cfg.eps1());
    const long double l2 = static_cast<long double>(p.log_n) * p.log_n;
    const long double er = cfg.eps_rel();
    const long double eh = cfg.eps_rho();
    auto at_least_one = [](long double x) {
        return static_cast<std::size_t>(std::max<u64>(1, detail::ceil_tolerant(x)));
    };
    p.k_rel = at_least_one(cfg.scale * 72.0L * l2 / (er * er * er * (1.0L - er)));
    p.k_rho = at_least_one(cfg.scale * 72.0L * l2 / (eh * eh * eh));
    p.k0 = at_least_one(cfg.scale * 12.0L * l2 * static_cast<long double>(p.k_rho) / (eh * (1.0L - eh)));
    return p;
}

/// The segments made active by an interval, largest first.
class ActiveSegmentEnumerator {
public:
    explicit ActiveSegmentEnumerator(Coord n) : tree_(n) {}

    std::vector<SegmentTree::Node> nodes(const Interval& iv) const {
        std::vector<SegmentTree::Node> out;
        tree_.for_each_active(iv, [&](SegmentTree::Node v) { out.push_back(v); });
        return out;
    }

    std::vector<Segment> segments(const Interval& iv) const {
        std::vector<Segment> out;
        tree_.for_each_active(iv, [&](SegmentTree::Node v) { out.push_back(tree_.segment(v)); });
        return out;
    }

    const SegmentTree& tree() const noexcept { return tree_; }

private:
    SegmentTree tree_;
};

/// Counts the occupied segments below a target, up to a cap.
class GammaTracker {
public:
    GammaTracker() = default;
    GammaTracker(SegmentTree::Node target, std::uint64_t cap) : target_(target), cap_(cap) {
        saturated_ = cap_ == 0;
    }

    void feed(const Interval& iv, const SegmentTree& tree) {
        if (saturated_ || target_ == 0) return;
        const auto s = tree.smallest_containing(iv);
        if (!tree.is_ancestor_or_self(target_, s)) return;
        // The seen set is closed under ancestors up to the target, so stop at the
        // first node already present.
        for (auto v = s;; v = SegmentTree::parent(v)) {
            if (!seen_.insert(v).second) break;
            if (v == target_) break;
        }
        if (seen_.size() >= cap_) {
            saturated_ = true;
            seen_.clear();
        }
    }

    SegmentTree::Node target() const noexcept { return target_; }
    bool saturated() const noexcept { return saturated_; }
    /// gamma(target) while unsaturated.
    std::size_t count() const noexcept { return seen_.size(); }
    std::uint64_t cap() const noexcept { return cap_; }
    std::size_t memory_units() const noexcept { return seen_.size(); }

private:
    SegmentTree::Node target_ = 0;
    std::uint64_t cap_ = 1;
    bool saturated_ = false;
    std::set<SegmentTree::Node> seen_;
};

/// Min-wise sample over the active segments, with trackers for the winner.
struct RelSample {
    MinWisePermutation perm;
    std::optional<MinWisePermutation::Key> best;
    SegmentTree::Node winner = 0;
    GammaTracker own;
    GammaTracker parent;

    explicit RelSample(MinWisePermutation p) : perm(std::move(p)) {}

    bool relevant() const noexcept {
        return winner > 1 && parent.saturated() && !own.saturated() && own.count() >= 1;
    }
};

struct RhoSample : RelSample {
    GeneralSelector selector;
    using RelSample::RelSample;
};

struct GeneralEstimate {
    double value = 0.0;
    bool fallback = true;
    bool degraded = false;
    double n_act = 0.0;
    std::size_t rel_hits = 0;  ///< X: relevant RelSample winners
    std::size_t rho_used = 0;  ///< relevant RhoSample winners averaged
    double rho = 0.0;
};

class GeneralEstimator {
public:
    explicit GeneralEstimator(const EstimatorConfig& cfg)
        : cfg_(cfg), plan_(plan_general(cfg)), tree_(cfg.n),
          rel_family_(family_new(tree_.id_universe(), cfg.eps_rel())),
          rho_family_(family_new(tree_.id_universe(), cfg.eps_rho())),
          rel_table_(rel_family_.p, rel_family_.t), rho_table_(rho_family_.p, rho_family_.t),
          root_gamma_(SegmentTree::root(), plan_.cap) {
        if (plan_.k_rel + plan_.k0 > cfg.max_samplers)
            throw SizeError("estimator would need " + std::to_string(plan_.k_rel + plan_.k0) +
                            " samplers; lower the scale");
        counter_ = make_distinct_counter(cfg.counter_kind, tree_.id_universe(), cfg.eps1(),
                                         derive_seed(cfg.seed, kCounterTag));
        CounterRng rel_rng{derive_seed(cfg.seed, kRelTag)};
        rel_.reserve(plan_.k_rel);
        for (std::size_t i = 0; i < plan_.k_rel; ++i) rel_.emplace_back(MinWisePermutation(rel_family_, rel_rng));
        CounterRng rho_rng{derive_seed(cfg.seed, kRhoTag)};
        rho_.reserve(plan_.k0);
        for (std::size_t i = 0; i < plan_.k0; ++i) rho_.emplace_back(MinWisePermutation(rho_family_, rho_rng));
    }

    void process(const Interval& iv) {
        if (iv.left < 1 || iv.right > cfg_.n)
            throw InputError("interval " + to_string(iv) + " outside [1, " + std::to_string(cfg_.n) + "]");
        ++processed_;
        tree_.for_each_active(iv, [&](SegmentTree::Node v) { offer(v); });

        for (auto& s : rel_) feed(s, iv);
        for (auto& s : rho_) {
            feed(s, iv);
            if (s.winner != 0 && tree_.contains(s.winner, iv)) s.selector.process(iv);
        }
        root_gamma_.feed(iv, tree_);
        root_selector_.process(iv);
    }

    GeneralEstimate estimate() const {
        GeneralEstimate e;
        e.n_act = counter_->estimate();
        if (processed_ == 0) return e;
        if (!root_gamma_.saturated()) {
            e.value = static_cast<double>(root_selector_.window_count());
            return e;
        }
        e.fallback = false;
        for (const auto& s : rel_)
            if (s.relevant()) ++e.rel_hits;
        double sum = 0.0;
        for (const auto& s : rho_) {
            if (e.rho_used == plan_.k_rho) break;
            if (!s.relevant()) continue;
            sum += static_cast<double>(s.selector.window_count());
            ++e.rho_used;
        }
        e.degraded = e.rho_used < plan_.k_rho;
        // With no relevant rho winner at all, fall back to the smallest possible
        // beta-hat of a relevant segment.
        e.rho = e.rho_used == 0 ? 1.0 : sum / static_cast<double>(e.rho_used);
        const double n_rel = e.n_act * static_cast<double>(e.rel_hits) / static_cast<double>(plan_.k_rel);
        const double norm = (1.0 + cfg_.eps1()) * (1.0 + cfg_.eps1());
        e.value = n_rel * e.rho / norm;
        return e;
    }

    std::size_t memory_units() const {
        std::size_t units = counter_->memory_units() + root_gamma_.memory_units() + root_selector_.memory_units();
        for (const auto& s : rel_) units += 1 + s.own.memory_units() + s.parent.memory_units();
        for (const auto& s : rho_)
            units += 1 + s.own.memory_units() + s.parent.memory_units() + s.selector.memory_units();
        return units + seen_.size();
    }

    const EstimatorConfig& config() const noexcept { return cfg_; }
    const GeneralPlan& plan() const noexcept { return plan_; }
    const SegmentTree& tree() const noexcept { return tree_; }
    const std::vector<RelSample>& rel_samples() const noexcept { return rel_; }
    const std::vector<RhoSample>& rho_samples() const noexcept { return rho_; }
    const GammaTracker& root_tracker() const noexcept { return root_gamma_; }
    const DistinctCounter& counter() const noexcept { return *counter_; }
    std::size_t processed() const noexcept { return processed_; }

private:
    static constexpr u64 kCounterTag = 0x6e616374;
    static constexpr u64 kRelTag = 0x72656c;
    static constexpr u64 kRhoTag = 0x72686f;

    void offer(SegmentTree::Node v) {
        const u64 id = tree_.segment_id(v);
        counter_->observe(id);
        if (cfg_.skip_repeats && !seen_.insert(id).second) return;
        rel_table_.load(id);
        for (auto& s : rel_) take(s, v, s.perm.key(rel_table_));
        rho_table_.load(id);
        for (auto& s : rho_) {
            if (take(s, v, s.perm.key(rho_table_))) s.selector.reset();
        }
    }

    bool take(RelSample& s, SegmentTree::Node v, MinWisePermutation::Key k) {
        if (s.best && !(k < *s.best)) return false;
        s.best = k;
        s.winner = v;
        s.own = GammaTracker(v, plan_.cap);
        s.parent = v == SegmentTree::root() ? GammaTracker() : GammaTracker(SegmentTree::parent(v), plan_.cap);
        return true;
    }

    void feed(RelSample& s, const Interval& iv) {
        if (s.winner == 0) return;
        s.own.feed(iv, tree_);
        s.parent.feed(iv, tree_);
    }

    EstimatorConfig cfg_;
    GeneralPlan plan_;
    SegmentTree tree_;
    FamilyParams rel_family_;
    FamilyParams rho_family_;
    PowerTable rel_table_;
    PowerTable rho_table_;
    std::unique_ptr<DistinctCounter> counter_;
    std::vector<RelSample> rel_;
    std::vector<RhoSample> rho_;
    GammaTracker root_gamma_;
    GeneralSelector root_selector_;
    std::unordered_set<u64> seen_;
    std::size_t processed_ = 0;
};

/// The same combination with every sampled quantity replaced by its exact value.
inline double estimate_general_oracle(const Instance& inst, double user_eps) {
    check_eps(user_eps);
    if (inst.intervals.empty()) return 0.0;
    const double eps1 = user_eps / 6.0;
    const GammaTable table(inst);
    const auto rel = relevant_nodes(table, eps1);
    if (rel.size() == 1 && rel.front() == SegmentTree::root())
        return static_cast<double>(beta_hat(inst, table.tree().segment(SegmentTree::root())));
    std::size_t sum = 0;
    for (auto v : rel) sum += beta_hat(inst, table.tree().segment(v));
    return static_cast<double>(sum) / ((1.0 + eps1) * (1.0 + eps1));
}

} // namespace streamsel
