#pragma once

// One-pass 2-approximation for the largest independent set of intervals.
//
// The line is kept partitioned into windows. Every window has seen at least one
// interval contained in it, and all intervals contained in a window pairwise
// intersect; picking one contained interval per window then gives more than
// alpha/2 disjoint intervals. Each window stores two witnesses (the contained
// interval with the smallest right end and the one with the largest left end)
// whose intersection is the common core of everything inside the window. An
// interval that misses the core splits the window at one end of the core.

#include <algorithm>
#include <cstddef>
#include <iterator>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "interval.hpp"

namespace streamsel {

struct WindowState {
    Window window;
    Interval leftmost;
    Interval rightmost;
    Interval chosen;
};

class GeneralSelector {
public:
    GeneralSelector() = default;

    void process(const Interval& iv) {
        ++processed_;
        if (windows_.empty()) {
            windows_.emplace(kMinusInfinity, WindowState{Window::whole_line(), iv, iv, iv});
            peak_ = 1;
            return;
        }

        ++lookups_;
        auto it = std::prev(windows_.upper_bound(iv.lcode()));
        WindowState& w = it->second;
        if (iv.rcode() > w.window.hi) return; // straddles a window boundary

        const Code x = iv.lcode();
        const Code y = iv.rcode();
        const Code core_l = std::max(w.leftmost.lcode(), w.rightmost.lcode());
        const Code core_r = std::min(w.leftmost.rcode(), w.rightmost.rcode());

        if (std::max(core_l, x) <= std::min(core_r, y)) {
            const bool new_right = core_l < x || (core_l == x && properly_contains(w.rightmost, iv));
            const bool new_left = y < core_r || (y == core_r && properly_contains(w.leftmost, iv));
            if (new_right) w.rightmost = iv;
            if (new_left) w.leftmost = iv;
            return;
        }

        // iv is disjoint from the core: split.
        const Window old = w.window;
        WindowState first;
        WindowState second;
        if (x > core_r) {
            first = WindowState{Window{old.lo, core_r}, w.leftmost, w.leftmost, w.leftmost};
            second = WindowState{Window{core_r + 1, old.hi}, iv, iv, iv};
        } else {
            first = WindowState{Window{old.lo, core_l - 1}, iv, iv, iv};
            second = WindowState{Window{core_l, old.hi}, w.rightmost, w.rightmost, w.rightmost};
        }
        it->second = first;
        windows_.emplace_hint(std::next(it), second.window.lo, second);
        peak_ = std::max(peak_, windows_.size());
    }

    /// One interval per window, in left-to-right order.
    std::vector<Interval> solution() const {
        std::vector<Interval> out;
        out.reserve(windows_.size());
        for (const auto& [lo, w] : windows_) out.push_back(w.chosen);
        return out;
    }

    std::vector<WindowState> windows() const {
        std::vector<WindowState> out;
        out.reserve(windows_.size());
        for (const auto& [lo, w] : windows_) out.push_back(w);
        return out;
    }

    std::size_t window_count() const noexcept { return windows_.size(); }
    std::size_t peak_window_count() const noexcept { return peak_; }
    std::size_t processed() const noexcept { return processed_; }
    /// Ordered-container searches performed; one per item after the first.
    std::size_t lookups() const noexcept { return lookups_; }
    /// Stored intervals: three per window.
    std::size_t memory_units() const noexcept { return 3 * windows_.size(); }

    void reset() {
        windows_.clear();
        peak_ = processed_ = lookups_ = 0;
    }

private:
    std::map<Code, WindowState> windows_;
    std::size_t peak_ = 0;
    std::size_t processed_ = 0;
    std::size_t lookups_ = 0;
};

/// Replays `prefix` (everything the selector has consumed) against its current
/// partition and reports the first broken invariant, if any.
inline std::optional<std::string> check_partition(const GeneralSelector& sel,
                                                  std::span<const Interval> prefix) {
    const auto ws = sel.windows();
    if (prefix.empty()) {
        if (!ws.empty()) return "windows exist before any input";
        return std::nullopt;
    }
    if (ws.empty()) return "no windows after input";
    if (!ws.front().window.low_unbounded() || !ws.back().window.high_unbounded())
        return "partition does not reach both infinities";
    for (std::size_t i = 0; i < ws.size(); ++i) {
        const auto& w = ws[i];
        if (w.window.empty()) return "empty window " + w.window.to_string();
        if (i + 1 < ws.size() && ws[i + 1].window.lo != w.window.hi + 1)
            return "gap or overlap after window " + w.window.to_string();
        for (const Interval* iv : {&w.leftmost, &w.rightmost, &w.chosen})
            if (!contained_in(*iv, w.window))
                return "witness " + to_string(*iv) + " outside window " + w.window.to_string();
        if (!intersects(w.leftmost, w.rightmost)) return "witnesses disjoint in " + w.window.to_string();

        std::vector<const Interval*> inside;
        for (const auto& iv : prefix)
            if (contained_in(iv, w.window)) inside.push_back(&iv);
        if (inside.empty()) return "window " + w.window.to_string() + " contains no input";
        Code min_r = inside.front()->rcode();
        Code max_l = inside.front()->lcode();
        for (const Interval* iv : inside) {
            min_r = std::min(min_r, iv->rcode());
            max_l = std::max(max_l, iv->lcode());
        }
        // All contained intervals pairwise intersect iff max left <= min right.
        if (max_l > min_r) return "disjoint intervals inside " + w.window.to_string();
        if (w.leftmost.rcode() != min_r) return "leftmost witness wrong in " + w.window.to_string();
        if (w.rightmost.lcode() != max_l) return "rightmost witness wrong in " + w.window.to_string();
    }
    if (sel.solution().size() != ws.size()) return "solution size differs from window count";
    return std::nullopt;
}

} // namespace streamsel
