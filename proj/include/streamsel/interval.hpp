#pragma once

// Integer intervals with open/closed endpoints, embedded in "position-code" space.
//
// A closed endpoint at integer v has code 2v. An open left endpoint at v has code
// 2v+1 and an open right endpoint at v has code 2v-1, so every interval becomes the
// closed integer range [lcode, rcode]. Even codes stand for the integer points, odd
// codes for the open gaps between them. All set predicates reduce to integer
// comparisons on codes.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "errors.hpp"

namespace streamsel {

using Coord = std::int64_t;
using Code = std::int64_t;

inline constexpr Code kMinusInfinity = std::numeric_limits<Code>::min();
inline constexpr Code kPlusInfinity = std::numeric_limits<Code>::max();

constexpr Code floor_div(Code a, Code b) noexcept {
    Code q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

struct Interval {
    Coord left = 0;
    Coord right = 0;
    bool left_open = false;
    bool right_open = false;

    constexpr Code lcode() const noexcept { return 2 * left + (left_open ? 1 : 0); }
    constexpr Code rcode() const noexcept { return 2 * right - (right_open ? 1 : 0); }
    constexpr Coord length() const noexcept { return right - left; }
    constexpr bool closed() const noexcept { return !left_open && !right_open; }

    /// Throws DomainError if the interval is empty or reversed.
    void validate() const {
        if (left > right)
            throw DomainError("interval has left endpoint " + std::to_string(left) +
                              " > right endpoint " + std::to_string(right));
        if (left == right && (left_open || right_open))
            throw DomainError("zero-length interval at " + std::to_string(left) +
                              " must be closed");
    }

    static Interval closed_at(Coord l, Coord r) { return make(l, r, false, false); }
    static Interval open_at(Coord l, Coord r) { return make(l, r, true, true); }
    static Interval make(Coord l, Coord r, bool lo, bool ro) {
        Interval iv{l, r, lo, ro};
        iv.validate();
        return iv;
    }

    friend constexpr bool operator==(const Interval&, const Interval&) = default;
};

/// True iff the point sets of a and b share a point.
constexpr bool intersects(const Interval& a, const Interval& b) noexcept {
    return std::max(a.lcode(), b.lcode()) <= std::min(a.rcode(), b.rcode());
}

/// True iff every point of inner lies in outer.
constexpr bool contains(const Interval& outer, const Interval& inner) noexcept {
    return outer.lcode() <= inner.lcode() && inner.rcode() <= outer.rcode();
}

/// inner is contained in outer and differs from it as a point set.
constexpr bool properly_contains(const Interval& outer, const Interval& inner) noexcept {
    return contains(outer, inner) &&
           (outer.lcode() != inner.lcode() || outer.rcode() != inner.rcode());
}

/// A region of the line built by an algorithm. Stored as a closed code range; the
/// extreme codes stand for -inf / +inf.
struct Window {
    Code lo = kMinusInfinity;
    Code hi = kPlusInfinity;

    static constexpr Window whole_line() noexcept { return Window{}; }

    constexpr bool low_unbounded() const noexcept { return lo == kMinusInfinity; }
    constexpr bool high_unbounded() const noexcept { return hi == kPlusInfinity; }
    constexpr bool empty() const noexcept { return lo > hi; }

    // Coordinate view. Only meaningful for bounded ends.
    constexpr Coord low() const noexcept { return floor_div(lo, 2); }
    constexpr bool low_closed() const noexcept { return !low_unbounded() && lo % 2 == 0; }
    constexpr Coord high() const noexcept { return floor_div(hi + 1, 2); }
    constexpr bool high_closed() const noexcept { return !high_unbounded() && hi % 2 == 0; }

    constexpr bool contains_code(Code c) const noexcept { return lo <= c && c <= hi; }

    std::string to_string() const {
        std::string s = low_unbounded() ? "(-inf" : (low_closed() ? "[" : "(") + std::to_string(low());
        s += ", ";
        s += high_unbounded() ? "+inf)" : std::to_string(high()) + (high_closed() ? "]" : ")");
        return s;
    }

    friend constexpr bool operator==(const Window&, const Window&) = default;
};

constexpr bool contained_in(const Interval& a, const Window& w) noexcept {
    return w.lo <= a.lcode() && a.rcode() <= w.hi;
}

/// Half-open window [low, high) over integer coordinates.
constexpr Window half_open_window(Coord low, Coord high) noexcept {
    return Window{2 * low, 2 * high - 1};
}

/// A stream of intervals over the universe {1, ..., n}.
struct Instance {
    Coord n = 1;
    std::vector<Interval> intervals;
    bool n_declared = true;

    std::size_t size() const noexcept { return intervals.size(); }
    bool empty() const noexcept { return intervals.empty(); }

    /// Throws DomainError if an interval is empty or leaves [1, n].
    void validate() const {
        if (n < 1) throw DomainError("universe bound n must be positive");
        for (const auto& iv : intervals) {
            iv.validate();
            if (iv.left < 1 || iv.right > n)
                throw DomainError("interval endpoint outside [1, " + std::to_string(n) + "]");
        }
    }

    friend bool operator==(const Instance& a, const Instance& b) {
        return a.n == b.n && a.intervals == b.intervals;
    }
};

inline std::string to_string(const Interval& iv) {
    std::string s = iv.left_open ? "(" : "[";
    s += std::to_string(iv.left) + "," + std::to_string(iv.right);
    s += iv.right_open ? ")" : "]";
    return s;
}

/// True iff no two of the intervals share a point.
inline bool pairwise_disjoint(std::vector<Interval> ivs) {
    std::sort(ivs.begin(), ivs.end(),
              [](const Interval& a, const Interval& b) { return a.lcode() < b.lcode(); });
    for (std::size_t i = 1; i < ivs.size(); ++i)
        if (ivs[i - 1].rcode() >= ivs[i].lcode()) return false;
    return true;
}

} // namespace streamsel
