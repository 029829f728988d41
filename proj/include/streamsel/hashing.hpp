#pragma once

// Sampling substrate: a counter-based RNG, prime-field k-wise independent hashing,
// eps-min-wise permutation orders built from it, streaming min-samplers, and
// distinct-element counters.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iterator>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace streamsel {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

// ---------------------------------------------------------------------------
// Randomness
// ---------------------------------------------------------------------------

constexpr u64 splitmix64(u64 x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Independent child seed for substream `tag`/`index` of a master seed.
constexpr u64 derive_seed(u64 master, u64 tag, u64 index = 0) noexcept {
    return splitmix64(master ^ splitmix64(splitmix64(tag) + index));
}

/// Counter-based generator: output i is a fixed mix of (seed, i), so a run is a
/// pure function of its seed.
class CounterRng {
public:
    explicit constexpr CounterRng(u64 seed) noexcept : seed_(splitmix64(seed)) {}

    constexpr u64 next() noexcept {
        return splitmix64(seed_ + 0xd1b54a32d192ed03ULL * ++counter_);
    }

    /// Uniform integer in [0, bound). bound must be positive.
    u64 uniform_below(u64 bound) noexcept {
        // Lemire's multiply-shift with rejection.
        u64 x = next();
        u128 m = static_cast<u128>(x) * bound;
        u64 low = static_cast<u64>(m);
        if (low < bound) {
            const u64 threshold = (0 - bound) % bound;
            while (low < threshold) {
                x = next();
                m = static_cast<u128>(x) * bound;
                low = static_cast<u64>(m);
            }
        }
        return static_cast<u64>(m >> 64);
    }

    /// Uniform real in [0, 1).
    double uniform01() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    constexpr u64 counter() const noexcept { return counter_; }

private:
    u64 seed_;
    u64 counter_ = 0;
};

// ---------------------------------------------------------------------------
// Primes
// ---------------------------------------------------------------------------

constexpr u64 mulmod(u64 a, u64 b, u64 m) noexcept {
    return static_cast<u64>(static_cast<u128>(a) * b % m);
}

constexpr u64 powmod(u64 b, u64 e, u64 m) noexcept {
    u64 r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1) r = mulmod(r, b, m);
        b = mulmod(b, b, m);
        e >>= 1;
    }
    return r;
}

/// Deterministic Miller-Rabin for 64-bit integers.
constexpr bool is_prime(u64 n) noexcept {
    if (n < 2) return false;
    for (u64 q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % q == 0) return n == q;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

constexpr u64 next_prime(u64 m) noexcept {
    if (m <= 2) return 2;
    u64 p = m | 1;
    while (!is_prime(p)) p += 2;
    return p;
}

// ---------------------------------------------------------------------------
// k-wise independent hashing over F_p
// ---------------------------------------------------------------------------

/// Powers 1, x, x^2, ..., x^(t-1) mod p. Lets many hash functions with the same
/// (p, t) share the modular exponentiation when they evaluate the same key.
class PowerTable {
public:
    PowerTable(u64 p, std::size_t t) : p_(p), powers_(t) {}

    void load(u64 x) {
        x %= p_;
        u64 acc = 1 % p_;
        for (auto& pw : powers_) {
            pw = acc;
            acc = mulmod(acc, x, p_);
        }
        key_ = x;
    }

    std::span<const u64> powers() const noexcept { return powers_; }
    u64 prime() const noexcept { return p_; }
    u64 key() const noexcept { return key_; }

private:
    u64 p_;
    std::vector<u64> powers_;
    u64 key_ = 0;
};

/// x -> sum_i c_i x^i mod p with t uniformly drawn coefficients; any t distinct
/// keys map to jointly uniform values.
class KWiseHash {
public:
    KWiseHash() = default;

    KWiseHash(u64 p, std::size_t t, CounterRng& rng) : p_(p), coeffs_(t) {
        if (p < 2) throw ParameterError("hash modulus must be a prime >= 2");
        if (t < 1) throw ParameterError("hash degree must be >= 1");
        for (auto& c : coeffs_) c = rng.uniform_below(p);
        const long double bound = static_cast<long double>(p - 1) * (p - 1) * t;
        if (bound < 0x1.0p64L)
            mode_ = Mode::narrow;
        else if (p < (1ULL << 58) && t < 1024)
            mode_ = Mode::wide;
        else
            mode_ = Mode::reduce_each;
    }

    /// Horner evaluation with a reduction per step.
    u64 operator()(u64 x) const noexcept {
        x %= p_;
        u64 acc = 0;
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
            acc = static_cast<u64>((static_cast<u128>(acc) * x + *it) % p_);
        return acc;
    }

    /// Same value as operator()(table.key()), from precomputed powers.
    u64 evaluate(const PowerTable& table) const noexcept {
        auto pw = table.powers();
        switch (mode_) {
        case Mode::narrow: {
            u64 acc = 0;
            for (std::size_t i = 0; i < coeffs_.size(); ++i) acc += coeffs_[i] * pw[i];
            return acc % p_;
        }
        case Mode::wide: {
            u128 acc = 0;
            for (std::size_t i = 0; i < coeffs_.size(); ++i)
                acc += static_cast<u128>(coeffs_[i]) * pw[i];
            return static_cast<u64>(acc % p_);
        }
        case Mode::reduce_each:
        default: {
            u64 acc = 0;
            for (std::size_t i = 0; i < coeffs_.size(); ++i) {
                acc += mulmod(coeffs_[i], pw[i], p_);
                if (acc >= p_) acc -= p_;
            }
            return acc;
        }
        }
    }

    u64 prime() const noexcept { return p_; }
    std::size_t degree() const noexcept { return coeffs_.size(); }
    std::span<const u64> coefficients() const noexcept { return coeffs_; }

private:
    enum class Mode { narrow, wide, reduce_each };
    u64 p_ = 2;
    std::vector<u64> coeffs_;
    Mode mode_ = Mode::reduce_each;
};

// ---------------------------------------------------------------------------
// Min-wise permutation family
// ---------------------------------------------------------------------------

struct FamilyConstants {
    double c1 = 8.0; ///< hash range m >= c1 * n / eps
    double c2 = 4.0; ///< independence t >= c2 * log2(1/eps)
};

/// Parameters of the eps-min-wise family over [n]. A pure function of its inputs.
struct FamilyParams {
    u64 universe = 1;
    double eps = 0.25;
    u64 m = 2;          ///< minimum hash range
    u64 p = 2;          ///< smallest prime >= m
    std::size_t t = 2;  ///< independence (number of coefficients)

    friend bool operator==(const FamilyParams&, const FamilyParams&) = default;
};

namespace detail {
inline u64 ceil_tolerant(long double x) {
    const long double r = std::nearbyint(x);
    if (std::fabs(x - r) <= 1e-9L * std::max<long double>(1.0L, std::fabs(x))) return static_cast<u64>(r);
    return static_cast<u64>(std::ceil(x));
}
} // namespace detail

inline FamilyParams family_new(u64 n, double eps, FamilyConstants c = {}) {
    if (!(eps > 0.0 && eps < 0.5)) throw ParameterError("family eps must lie in (0, 1/2)");
    if (n < 1) throw ParameterError("family universe must be >= 1");
    if (c.c1 <= 0.0 || c.c2 <= 0.0) throw ParameterError("family constants must be positive");
    FamilyParams f;
    f.universe = n;
    f.eps = eps;
    f.m = std::max<u64>(n + 1, detail::ceil_tolerant(static_cast<long double>(c.c1) * n / eps));
    f.p = next_prime(f.m);
    f.t = std::max<std::size_t>(2, detail::ceil_tolerant(c.c2 * std::log2(1.0L / eps)));
    return f;
}

/// Order on [n] given by lexicographic comparison of (h(x), x) for a drawn hash h.
class MinWisePermutation {
public:
    struct Key {
        u64 hash;
        u64 element;
        friend constexpr auto operator<=>(const Key&, const Key&) = default;
    };

    MinWisePermutation(const FamilyParams& family, CounterRng& rng)
        : universe_(family.universe), hash_(family.p, family.t, rng) {}

    Key key(u64 x) const noexcept { return Key{hash_(x), x}; }
    Key key(const PowerTable& table) const noexcept { return Key{hash_.evaluate(table), table.key()}; }

    bool less(u64 x, u64 y) const noexcept { return key(x) < key(y); }

    u64 universe() const noexcept { return universe_; }
    const KWiseHash& hash() const noexcept { return hash_; }

private:
    u64 universe_;
    KWiseHash hash_;
};

/// Keeps the order-minimum of everything observed.
class MinSampler {
public:
    explicit MinSampler(MinWisePermutation perm) : perm_(std::move(perm)) {}

    /// Returns true when x becomes the new winner.
    bool observe(u64 x) { return offer(perm_.key(x)); }
    bool observe(const PowerTable& table) { return offer(perm_.key(table)); }

    std::optional<u64> winner() const noexcept {
        if (!winner_) return std::nullopt;
        return winner_->element;
    }
    const MinWisePermutation& permutation() const noexcept { return perm_; }

private:
    bool offer(MinWisePermutation::Key k) {
        if (winner_ && !(k < *winner_)) return false;
        winner_ = k;
        return true;
    }

    MinWisePermutation perm_;
    std::optional<MinWisePermutation::Key> winner_;
};

// ---------------------------------------------------------------------------
// Distinct counters
// ---------------------------------------------------------------------------

enum class CounterKind { exact, kmv };

inline CounterKind parse_counter_kind(std::string_view s) {
    if (s == "exact") return CounterKind::exact;
    if (s == "kmv") return CounterKind::kmv;
    throw ParameterError("counter kind must be `exact` or `kmv`, got `" + std::string(s) + "`");
}

inline const char* to_string(CounterKind k) { return k == CounterKind::exact ? "exact" : "kmv"; }

class DistinctCounter {
public:
    virtual ~DistinctCounter() = default;
    virtual void observe(u64 id) = 0;
    virtual double estimate() const = 0;
    /// Stored items, for space accounting.
    virtual std::size_t memory_units() const = 0;
};

class ExactDistinct final : public DistinctCounter {
public:
    void observe(u64 id) override { seen_.insert(id); }
    double estimate() const override { return static_cast<double>(seen_.size()); }
    std::size_t memory_units() const override { return seen_.size(); }
    std::size_t count() const noexcept { return seen_.size(); }

private:
    std::unordered_set<u64> seen_;
};

/// Bottom-k sketch. Exact below k distinct ids; (k-1)/U_k after saturation,
/// where U_k = (h_k + 1)/p is the normalized k-th smallest hash.
class KMVDistinct final : public DistinctCounter {
public:
    KMVDistinct(u64 universe, std::size_t k, u64 seed) : k_(k) {
        if (k < 2) throw ParameterError("KMV size must be >= 2");
        CounterRng rng{seed};
        hash_ = KWiseHash(next_prime(std::max<u64>(universe + 1, 1ULL << 30)), 8, rng);
    }

    void observe(u64 id) override {
        const std::pair<u64, u64> key{hash_(id), id};
        if (bottom_.size() < k_) {
            bottom_.insert(key);
            return;
        }
        auto last = std::prev(bottom_.end());
        if (key < *last && bottom_.insert(key).second) bottom_.erase(std::prev(bottom_.end()));
    }

    double estimate() const override {
        if (bottom_.size() < k_) return static_cast<double>(bottom_.size());
        const double kth = static_cast<double>(std::prev(bottom_.end())->first) + 1.0;
        return static_cast<double>(k_ - 1) * static_cast<double>(hash_.prime()) / kth;
    }

    std::size_t memory_units() const override { return bottom_.size(); }
    std::size_t capacity() const noexcept { return k_; }

    /// Bottom-k size that yields a (1 +- eps) estimate with high probability.
    static std::size_t size_for(double eps) { return static_cast<std::size_t>(std::ceil(96.0 / (eps * eps))); }

private:
    std::size_t k_;
    KWiseHash hash_;
    std::set<std::pair<u64, u64>> bottom_;
};

inline std::unique_ptr<DistinctCounter> make_distinct_counter(CounterKind kind, u64 universe,
                                                              double eps, u64 seed) {
    if (kind == CounterKind::exact) return std::make_unique<ExactDistinct>();
    return std::make_unique<KMVDistinct>(universe, KMVDistinct::size_for(eps), seed);
}

} // namespace streamsel
