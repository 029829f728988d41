#pragma once

// Instance generators: seeded random streams and the two INDEX-reduction
// streams whose alpha takes one of two values depending on a hidden bit.

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "errors.hpp"
#include "hashing.hpp"
#include "interval.hpp"

namespace streamsel {

/// `count` closed intervals: length uniform in [0, max_len], then left end
/// uniform in [1, n - length].
inline Instance gen_uniform(Coord n, std::size_t count, Coord max_len, u64 seed) {
    if (max_len < 1 || max_len >= n) throw ParameterError("gen_uniform needs 1 <= max_len < n");
    CounterRng rng{seed};
    Instance inst;
    inst.n = n;
    inst.intervals.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const auto len = static_cast<Coord>(rng.uniform_below(static_cast<u64>(max_len) + 1));
        const auto left = 1 + static_cast<Coord>(rng.uniform_below(static_cast<u64>(n - len)));
        inst.intervals.push_back(Interval{left, left + len});
    }
    return inst;
}

/// Like gen_uniform, but each end of a positive-length interval is open with
/// probability 1/2.
inline Instance gen_mixed(Coord n, std::size_t count, Coord max_len, u64 seed) {
    Instance inst = gen_uniform(n, count, max_len, seed);
    CounterRng rng{derive_seed(seed, 0x6f70656e)};
    for (auto& iv : inst.intervals) {
        const u64 bits = rng.next();
        if (iv.length() == 0) continue;
        iv.left_open = bits & 1;
        iv.right_open = (bits >> 1) & 1;
    }
    return inst;
}

/// `count` intervals of length lambda with left end uniform in [1, n - lambda].
/// With `mixed`, endpoint openness is random.
inline Instance gen_samelen(Coord n, std::size_t count, Coord lambda, u64 seed, bool mixed = false) {
    if (lambda < 1 || lambda >= n) throw ParameterError("gen_samelen needs 1 <= lambda < n");
    CounterRng rng{seed};
    Instance inst;
    inst.n = n;
    inst.intervals.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const auto left = 1 + static_cast<Coord>(rng.uniform_below(static_cast<u64>(n - lambda)));
        Interval iv{left, left + lambda};
        if (mixed) {
            const u64 bits = rng.next();
            iv.left_open = bits & 1;
            iv.right_open = (bits >> 1) & 1;
        }
        inst.intervals.push_back(iv);
    }
    return inst;
}

namespace detail {
inline void check_index_args(int n_bits, const std::set<int>& s, int i) {
    if (n_bits < 1) throw ParameterError("n_bits must be >= 1");
    if (i < 1 || i > n_bits) throw ParameterError("index i must lie in [1, n_bits]");
    for (int j : s)
        if (j < 1 || j > n_bits) throw ParameterError("set element " + std::to_string(j) + " outside [1, n_bits]");
}
} // namespace detail

/// Same-length INDEX stream with L = n_bits + 2: the closed [L+j, 2L+j] for
/// j in S, then the open (i, L+i) and (2L+i, 3L+i). alpha is 3 if i is in S,
/// else 2. Every interval has length L.
inline Instance gen_index_samelen(int n_bits, const std::set<int>& s, int i) {
    detail::check_index_args(n_bits, s, i);
    const Coord L = n_bits + 2;
    Instance inst;
    inst.n = 3 * L + n_bits;
    for (int j : s) inst.intervals.push_back(Interval::closed_at(L + j, 2 * L + j));
    inst.intervals.push_back(Interval::open_at(i, L + i));
    inst.intervals.push_back(Interval::open_at(2 * L + i, 3 * L + i));
    return inst;
}

inline Coord index_samelen_lambda(int n_bits) { return n_bits + 2; }

/// General INDEX stream with L = n_bits + 2: for j in S the k open intervals
/// (j + tL, j + (t+1)L), t < k, then the k+1 points [i + tL, i + tL], t <= k.
/// alpha is 2k+1 if i is in S, else k+1.
inline Instance gen_index_general(int n_bits, const std::set<int>& s, int i, int k) {
    detail::check_index_args(n_bits, s, i);
    if (k < 1) throw ParameterError("k must be >= 1");
    const Coord L = n_bits + 2;
    Instance inst;
    inst.n = n_bits + k * L;
    for (int j : s)
        for (int t = 0; t < k; ++t) inst.intervals.push_back(Interval::open_at(j + t * L, j + (t + 1) * L));
    for (int t = 0; t <= k; ++t) inst.intervals.push_back(Interval::closed_at(i + t * L, i + t * L));
    return inst;
}

/// Uniformly random subset of [1, n_bits].
inline std::set<int> random_subset(int n_bits, CounterRng& rng) {
    std::set<int> s;
    for (int j = 1; j <= n_bits; ++j)
        if (rng.next() & 1) s.insert(j);
    return s;
}

} // namespace streamsel
