#pragma once

// One-pass estimate of alpha for intervals of a common length lambda.
//
// Per grid shift a: gamma1 = number of occupied windows (distinct count over
// window indices) and M/k = fraction of min-wise sampled occupied windows that
// hold two disjoint intervals. Then alpha_a ~ gamma1 (1 + M/k).

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "errors.hpp"
#include "hashing.hpp"
#include "interval.hpp"
#include "selector_samelen.hpp"

namespace streamsel {

struct SamelenConfig {
    Coord n = 1;
    Coord lambda = 1;
    double user_eps = 0.25;
    u64 seed = 0;
    CounterKind counter_kind = CounterKind::exact;
    /// Skip sampler hashing for a window index already offered once; output is
    /// identical, at the cost of storing the offered indices.
    bool skip_repeats = false;

    double eps_a() const noexcept { return user_eps / 2.0; }
    double eps2() const noexcept { return eps_a() / 3.0; }
    std::size_t k() const {
        const long double e = eps2();
        return static_cast<std::size_t>(detail::ceil_tolerant(18.0L / (e * e)));
    }
    /// Size of the window-index universe the samplers hash over.
    u64 domain() const {
        return static_cast<u64>((2 * n + 3 * lambda - 1) / (3 * lambda)) + 2;
    }
};

struct WindowSampler {
    MinWisePermutation perm;
    std::optional<MinWisePermutation::Key> best;
    Code window = 0;
    Interval leftmost;
    Interval rightmost;

    explicit WindowSampler(MinWisePermutation p) : perm(std::move(p)) {}

    bool has_winner() const noexcept { return best.has_value(); }
    bool type2() const noexcept { return best && !intersects(leftmost, rightmost); }
};

class ShiftEstimator {
public:
    ShiftEstimator(int shift, const SamelenConfig& cfg, const FamilyParams& family)
        : grid_(shift, cfg.lambda), table_(family.p, family.t), skip_repeats_(cfg.skip_repeats) {
        counter_ = make_distinct_counter(cfg.counter_kind, cfg.domain(), cfg.eps2(),
                                         derive_seed(cfg.seed, kCounterTag, static_cast<u64>(shift)));
        CounterRng rng{derive_seed(cfg.seed, kSamplerTag, static_cast<u64>(shift))};
        const std::size_t k = cfg.k();
        samplers_.reserve(k);
        for (std::size_t i = 0; i < k; ++i) samplers_.emplace_back(MinWisePermutation(family, rng));
    }

    void process(const Interval& iv) {
        const auto j = grid_.containing(iv);
        if (!j) return;
        const u64 element = element_of(*j);
        counter_->observe(element);
        const bool fresh = !skip_repeats_ || seen_.insert(*j).second;
        if (fresh) table_.load(element);
        for (auto& s : samplers_) {
            if (fresh) {
                const auto key = s.perm.key(table_);
                if (!s.best || key < *s.best) {
                    s.best = key;
                    s.window = *j;
                    s.leftmost = s.rightmost = iv;
                    continue;
                }
            }
            if (s.window != *j || !s.best) continue;
            if (iv.rcode() < s.leftmost.rcode()) s.leftmost = iv;
            if (iv.lcode() > s.rightmost.lcode()) s.rightmost = iv;
        }
    }

    double gamma1() const { return counter_->estimate(); }
    std::size_t type2_count() const {
        return static_cast<std::size_t>(
            std::count_if(samplers_.begin(), samplers_.end(), [](const WindowSampler& s) { return s.type2(); }));
    }
    double estimate() const {
        if (samplers_.empty()) return gamma1();
        return gamma1() * (1.0 + static_cast<double>(type2_count()) / static_cast<double>(samplers_.size()));
    }

    /// Hash-domain element for window index j.
    static u64 element_of(Code j) noexcept { return static_cast<u64>(j + 2); }

    const ShiftedGrid& grid() const noexcept { return grid_; }
    const std::vector<WindowSampler>& samplers() const noexcept { return samplers_; }
    const DistinctCounter& counter() const noexcept { return *counter_; }
    std::size_t memory_units() const noexcept { return counter_->memory_units() + 3 * samplers_.size() + seen_.size(); }

private:
    static constexpr u64 kCounterTag = 0x67616d31;
    static constexpr u64 kSamplerTag = 0x6d6b;

    ShiftedGrid grid_;
    PowerTable table_;
    bool skip_repeats_;
    std::unique_ptr<DistinctCounter> counter_;
    std::vector<WindowSampler> samplers_;
    std::unordered_set<Code> seen_;
};

class SamelenEstimator {
public:
    explicit SamelenEstimator(const SamelenConfig& cfg) : cfg_(validated(cfg)), family_(family_new(cfg.domain(), cfg.eps2())) {
        for (int a = 0; a < 3; ++a) shifts_.emplace_back(a, cfg_, family_);
    }

    void process(const Interval& iv) {
        if (iv.length() != cfg_.lambda)
            throw InputError("interval " + to_string(iv) + " has length " + std::to_string(iv.length()) +
                             ", expected " + std::to_string(cfg_.lambda));
        if (iv.left < 1 || iv.right > cfg_.n)
            throw InputError("interval " + to_string(iv) + " outside [1, " + std::to_string(cfg_.n) + "]");
        for (auto& s : shifts_) s.process(iv);
    }

    double shift_estimate(int a) const { return shifts_.at(a).estimate(); }

    double estimate() const {
        double best = 0.0;
        for (const auto& s : shifts_) best = std::max(best, s.estimate());
        return best / (1.0 + cfg_.eps_a());
    }

    const ShiftEstimator& shift(int a) const { return shifts_.at(a); }
    const SamelenConfig& config() const noexcept { return cfg_; }
    const FamilyParams& family() const noexcept { return family_; }
    std::size_t memory_units() const {
        std::size_t u = 0;
        for (const auto& s : shifts_) u += s.memory_units();
        return u;
    }

private:
    static const SamelenConfig& validated(const SamelenConfig& cfg) {
        if (!(cfg.user_eps > 0.0 && cfg.user_eps < 0.5)) throw ParameterError("eps must lie in (0, 1/2)");
        if (cfg.lambda < 1) throw ParameterError("lambda must be >= 1");
        if (cfg.n < 1) throw ParameterError("n must be >= 1");
        return cfg;
    }

    SamelenConfig cfg_;
    FamilyParams family_;
    std::vector<ShiftEstimator> shifts_;
};

/// Exact per-window type counts of one grid: gamma1 windows hold an interval,
/// gamma2 hold two disjoint ones.
struct ShiftCounts {
    std::size_t gamma1 = 0;
    std::size_t gamma2 = 0;
};

inline ShiftCounts exact_shift_counts(const Instance& inst, int shift, Coord lambda) {
    const ShiftedGrid grid(shift, lambda);
    std::map<Code, std::pair<Code, Code>> extremes; // j -> (min rcode, max lcode)
    for (const auto& iv : inst.intervals) {
        const auto j = grid.containing(iv);
        if (!j) continue;
        auto [it, fresh] = extremes.try_emplace(*j, iv.rcode(), iv.lcode());
        if (!fresh) {
            it->second.first = std::min(it->second.first, iv.rcode());
            it->second.second = std::max(it->second.second, iv.lcode());
        }
    }
    ShiftCounts c;
    c.gamma1 = extremes.size();
    for (const auto& [j, e] : extremes)
        if (e.second > e.first) ++c.gamma2;
    return c;
}

/// max_a (gamma1 + gamma2) / (1 + eps/2), from exact counts.
inline double estimate_samelen_oracle(const Instance& inst, Coord lambda, double user_eps) {
    if (!(user_eps > 0.0 && user_eps < 0.5)) throw ParameterError("eps must lie in (0, 1/2)");
    if (lambda < 1) throw ParameterError("lambda must be >= 1");
    std::size_t best = 0;
    for (int a = 0; a < 3; ++a) {
        const auto c = exact_shift_counts(inst, a, lambda);
        best = std::max(best, c.gamma1 + c.gamma2);
    }
    return static_cast<double>(best) / (1.0 + user_eps / 2.0);
}

/// alpha of a zero-length stream: the number of distinct points.
inline std::size_t distinct_points(const Instance& inst) {
    std::unordered_set<Coord> pts;
    for (const auto& iv : inst.intervals) {
        if (iv.length() != 0) throw InputError("interval " + to_string(iv) + " is not a point");
        pts.insert(iv.left);
    }
    return pts.size();
}

} // namespace streamsel
