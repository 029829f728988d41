#pragma once

// Trial runner: runs an algorithm on an instance under many seeds, scores each run
// against the exact alpha, and aggregates. Reports serialize to JSON lines.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "estimator_general.hpp"
#include "estimator_samelen.hpp"
#include "hashing.hpp"
#include "interval.hpp"
#include "oracle.hpp"
#include "selector_general.hpp"
#include "selector_samelen.hpp"

namespace streamsel {

enum class Algorithm {
    select_general,
    select_samelen,
    estimate_general,
    estimate_general_oracle,
    estimate_samelen,
    estimate_samelen_oracle,
};

inline const char* to_string(Algorithm a) {
    switch (a) {
    case Algorithm::select_general: return "select-general";
    case Algorithm::select_samelen: return "select-samelen";
    case Algorithm::estimate_general: return "estimate-general";
    case Algorithm::estimate_general_oracle: return "estimate-general-oracle";
    case Algorithm::estimate_samelen: return "estimate-samelen";
    case Algorithm::estimate_samelen_oracle: return "estimate-samelen-oracle";
    }
    return "?";
}

inline Algorithm parse_algorithm(std::string_view s) {
    for (auto a : {Algorithm::select_general, Algorithm::select_samelen, Algorithm::estimate_general,
                   Algorithm::estimate_general_oracle, Algorithm::estimate_samelen,
                   Algorithm::estimate_samelen_oracle})
        if (s == to_string(a)) return a;
    throw ParameterError("unknown algorithm `" + std::string(s) + "`");
}

inline bool is_estimator(Algorithm a) {
    return a != Algorithm::select_general && a != Algorithm::select_samelen;
}

struct TrialSpec {
    Algorithm algorithm = Algorithm::select_general;
    double eps = 0.25;
    Coord lambda = 0; ///< 0: take the length of the first interval
    double scale = 1.0;
    CounterKind counter = CounterKind::exact;
    bool skip_repeats = false;
};

/// Relative slack on bracket ends, absorbing floating-point rounding only.
inline constexpr double kBracketSlack = 1e-9;

struct TrialReport {
    std::string instance_id;
    Algorithm algorithm = Algorithm::select_general;
    double eps = 0.0;
    Coord lambda = 0;
    u64 seed = 0;
    double scale = 1.0;
    CounterKind counter = CounterKind::exact;
    double output = 0.0;     ///< solution size or estimate
    std::size_t alpha = 0;   ///< exact optimum
    std::size_t peak_memory = 0;
    bool fallback = false;
    bool degraded = false;
    std::optional<double> wall_ms;

    /// Closed range of outputs the algorithm's guarantee allows.
    std::pair<double, double> bracket() const {
        const double a = static_cast<double>(alpha);
        switch (algorithm) {
        case Algorithm::select_general:
            // size > alpha/2, i.e. size >= floor(alpha/2) + 1 (0 for the empty stream)
            return {alpha == 0 ? 0.0 : std::floor(a / 2.0) + 1.0, a};
        case Algorithm::select_samelen:
            return {std::ceil(2.0 * a / 3.0 - kBracketSlack), a};
        case Algorithm::estimate_general: return {0.5 * (1.0 - eps) * a, a};
        case Algorithm::estimate_general_oracle: {
            const double e1 = eps / 6.0;
            return {(0.5 - e1) / ((1.0 + e1) * (1.0 + e1)) * a, a};
        }
        case Algorithm::estimate_samelen:
        case Algorithm::estimate_samelen_oracle: return {2.0 / 3.0 * (1.0 - eps) * a, a};
        }
        return {0.0, 0.0};
    }

    bool success() const {
        const auto [lo, hi] = bracket();
        const double slack = kBracketSlack * std::max(1.0, static_cast<double>(alpha));
        return output >= lo - slack && output <= hi + slack;
    }
};

inline nlohmann::json to_json(const TrialReport& r) {
    nlohmann::json j;
    j["type"] = "trial";
    j["instance"] = r.instance_id;
    j["algorithm"] = to_string(r.algorithm);
    j["eps"] = r.eps;
    j["lambda"] = r.lambda;
    j["seed"] = r.seed;
    j["scale"] = r.scale;
    j["counter"] = to_string(r.counter);
    j["output"] = r.output;
    j["alpha"] = r.alpha;
    const auto [lo, hi] = r.bracket();
    j["bracket"] = {lo, hi};
    j["success"] = r.success();
    j["peak_memory"] = r.peak_memory;
    if (is_estimator(r.algorithm)) {
        j["fallback"] = r.fallback;
        j["degraded"] = r.degraded;
    }
    if (r.wall_ms) j["wall_ms"] = *r.wall_ms;
    return j;
}

inline Coord resolve_lambda(const TrialSpec& spec, const Instance& inst) {
    if (spec.lambda > 0 || inst.intervals.empty()) return spec.lambda;
    return inst.intervals.front().length();
}

/// One run of `spec` on `inst` with the given seed. `alpha` is the exact optimum.
inline TrialReport run_one(const TrialSpec& spec, const Instance& inst, std::size_t alpha, u64 seed,
                           const std::string& instance_id = "", bool timing = false) {
    TrialReport r;
    r.instance_id = instance_id;
    r.algorithm = spec.algorithm;
    r.eps = spec.eps;
    r.seed = seed;
    r.scale = spec.scale;
    r.counter = spec.counter;
    r.alpha = alpha;
    r.lambda = resolve_lambda(spec, inst);
    const auto start = std::chrono::steady_clock::now();

    switch (spec.algorithm) {
    case Algorithm::select_general: {
        GeneralSelector sel;
        for (const auto& iv : inst.intervals) sel.process(iv);
        r.output = static_cast<double>(sel.window_count());
        r.peak_memory = sel.peak_window_count();
        break;
    }
    case Algorithm::select_samelen: {
        if (inst.intervals.empty()) break;
        SameLengthSelector sel(r.lambda);
        for (const auto& iv : inst.intervals) sel.process(iv);
        r.output = static_cast<double>(sel.solution_size());
        r.peak_memory = sel.peak_windows();
        break;
    }
    case Algorithm::estimate_general: {
        EstimatorConfig cfg;
        cfg.n = inst.n;
        cfg.user_eps = spec.eps;
        cfg.seed = seed;
        cfg.counter_kind = spec.counter;
        cfg.scale = spec.scale;
        cfg.skip_repeats = spec.skip_repeats;
        GeneralEstimator est(cfg);
        for (const auto& iv : inst.intervals) est.process(iv);
        const auto e = est.estimate();
        r.output = e.value;
        r.fallback = e.fallback;
        r.degraded = e.degraded;
        r.peak_memory = est.memory_units();
        break;
    }
    case Algorithm::estimate_general_oracle:
        r.output = estimate_general_oracle(inst, spec.eps);
        r.fallback = relevant_nodes(GammaTable(inst), spec.eps / 6.0) ==
                     std::vector<SegmentTree::Node>{SegmentTree::root()};
        break;
    case Algorithm::estimate_samelen: {
        if (r.lambda == 0) {
            r.output = static_cast<double>(distinct_points(inst));
            break;
        }
        SamelenConfig cfg;
        cfg.n = inst.n;
        cfg.lambda = r.lambda;
        cfg.user_eps = spec.eps;
        cfg.seed = seed;
        cfg.counter_kind = spec.counter;
        cfg.skip_repeats = spec.skip_repeats;
        SamelenEstimator est(cfg);
        for (const auto& iv : inst.intervals) est.process(iv);
        r.output = est.estimate();
        r.peak_memory = est.memory_units();
        break;
    }
    case Algorithm::estimate_samelen_oracle:
        if (r.lambda == 0) {
            r.output = static_cast<double>(distinct_points(inst));
            break;
        }
        r.output = estimate_samelen_oracle(inst, r.lambda, spec.eps);
        break;
    }

    if (timing)
        r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return r;
}

struct TrialSummary {
    std::vector<TrialReport> reports;
    std::size_t successes = 0;
    double success_fraction = 0.0;
    double median_output = 0.0;
    double ratio_min = 0.0; ///< output / alpha
    double ratio_median = 0.0;
    double ratio_max = 0.0;
    std::size_t peak_memory = 0;
    /// Median-of-groups: medians of consecutive groups of `group_size` trials.
    std::size_t group_size = 0;
    std::vector<double> group_medians;
    std::size_t group_successes = 0;

    bool all_succeeded() const noexcept { return successes == reports.size(); }
};

inline double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

inline nlohmann::json to_json(const TrialSummary& s) {
    nlohmann::json j;
    j["type"] = "summary";
    j["trials"] = s.reports.size();
    j["successes"] = s.successes;
    j["success_fraction"] = s.success_fraction;
    j["median_output"] = s.median_output;
    j["ratio_min"] = s.ratio_min;
    j["ratio_median"] = s.ratio_median;
    j["ratio_max"] = s.ratio_max;
    j["peak_memory"] = s.peak_memory;
    if (s.group_size > 0) {
        j["group_size"] = s.group_size;
        j["group_medians"] = s.group_medians;
        j["group_successes"] = s.group_successes;
    }
    return j;
}

/// Runs `trials` seeds base_seed, base_seed + 1, ... on up to `workers` threads.
/// Reports come back in seed order regardless of scheduling.
inline TrialSummary run_trials(const TrialSpec& spec, const Instance& inst, std::size_t trials, u64 base_seed,
                               std::size_t workers = 1, std::size_t group_size = 0,
                               const std::string& instance_id = "", bool timing = false) {
    if (trials < 1) throw ParameterError("trials must be >= 1");
    const std::size_t a = alpha(inst);
    TrialSummary s;
    s.reports.resize(trials);

    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < trials; i = next++)
            s.reports[i] = run_one(spec, inst, a, base_seed + i, instance_id, timing);
    };
    workers = std::clamp<std::size_t>(workers, 1, trials);
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    }

    std::vector<double> outputs;
    std::vector<double> ratios;
    for (const auto& r : s.reports) {
        outputs.push_back(r.output);
        if (r.alpha > 0) ratios.push_back(r.output / static_cast<double>(r.alpha));
        s.successes += r.success() ? 1 : 0;
        s.peak_memory = std::max(s.peak_memory, r.peak_memory);
    }
    s.success_fraction = static_cast<double>(s.successes) / static_cast<double>(trials);
    s.median_output = median(outputs);
    if (!ratios.empty()) {
        s.ratio_min = *std::min_element(ratios.begin(), ratios.end());
        s.ratio_max = *std::max_element(ratios.begin(), ratios.end());
        s.ratio_median = median(ratios);
    }

    if (group_size > 0) {
        s.group_size = group_size;
        for (std::size_t g = 0; g + group_size <= trials; g += group_size) {
            std::vector<double> grp(outputs.begin() + static_cast<std::ptrdiff_t>(g),
                                    outputs.begin() + static_cast<std::ptrdiff_t>(g + group_size));
            const double m = median(grp);
            s.group_medians.push_back(m);
            TrialReport probe = s.reports[g];
            probe.output = m;
            s.group_successes += probe.success() ? 1 : 0;
        }
    }
    return s;
}

} // namespace streamsel
