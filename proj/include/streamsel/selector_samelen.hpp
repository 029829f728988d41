#pragma once

// One-pass 3/2-approximation for intervals of a common length lambda.
//
// Three staggered grids of half-open windows [(a+3j)lambda, (a+3j+3)lambda), one
// per shift a in {0,1,2}. A window this short holds at most two disjoint closed
// intervals of length lambda, so its leftmost/rightmost witnesses give an optimal
// answer for the intervals inside it. Every interval lies inside windows of at
// least two grids; the best grid keeps 2/3 of an optimal solution.

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "interval.hpp"

namespace streamsel {

struct GridWindow {
    Interval leftmost;
    Interval rightmost;
    /// This window's share of the grid's solution: one interval, or two disjoint ones.
    std::vector<Interval> chosen;
};

/// Window geometry of one shifted grid. Shared by the selector and the estimator.
class ShiftedGrid {
public:
    ShiftedGrid(int shift, Coord lambda) : shift_(shift), lambda_(lambda) {}

    /// Index j of the window containing the left end of iv.
    Code window_index(const Interval& iv) const noexcept {
        return floor_div(iv.lcode() - 2 * shift_ * lambda_, 6 * lambda_);
    }

    Window window(Code j) const noexcept {
        const Coord low = (shift_ + 3 * j) * lambda_;
        return half_open_window(low, low + 3 * lambda_);
    }

    /// The index of the window containing iv, if some window of this grid does.
    std::optional<Code> containing(const Interval& iv) const noexcept {
        const Code j = window_index(iv);
        if (iv.rcode() <= window(j).hi) return j;
        return std::nullopt;
    }

    int shift() const noexcept { return shift_; }
    Coord lambda() const noexcept { return lambda_; }

private:
    int shift_;
    Coord lambda_;
};

class ShiftState {
public:
    ShiftState(int shift, Coord lambda) : grid_(shift, lambda) {}

    void process(const Interval& iv) {
        const auto j = grid_.containing(iv);
        if (!j) return;
        auto [it, inserted] = windows_.try_emplace(*j);
        GridWindow& w = it->second;
        if (inserted) {
            w.leftmost = w.rightmost = iv;
            w.chosen = {iv};
            ++solution_size_;
            return;
        }
        if (!intersects(w.leftmost, w.rightmost)) return; // already holds two disjoint intervals

        const Code core_l = std::max(w.leftmost.lcode(), w.rightmost.lcode());
        const Code core_r = std::min(w.leftmost.rcode(), w.rightmost.rcode());
        if (core_l < iv.lcode()) w.rightmost = iv;
        if (iv.rcode() < core_r) w.leftmost = iv;
        if (!intersects(w.leftmost, w.rightmost)) {
            w.chosen = {w.leftmost, w.rightmost};
            ++solution_size_;
        }
    }

    /// The grid's solution in left-to-right order.
    std::vector<Interval> solution() const {
        std::vector<Interval> out;
        out.reserve(solution_size_);
        for (const auto& [j, w] : windows_) out.insert(out.end(), w.chosen.begin(), w.chosen.end());
        return out;
    }

    std::size_t solution_size() const noexcept { return solution_size_; }
    std::size_t active_windows() const noexcept { return windows_.size(); }
    const std::map<Code, GridWindow>& windows() const noexcept { return windows_; }
    const ShiftedGrid& grid() const noexcept { return grid_; }

private:
    ShiftedGrid grid_;
    std::map<Code, GridWindow> windows_;
    std::size_t solution_size_ = 0;
};

class SameLengthSelector {
public:
    explicit SameLengthSelector(Coord lambda)
        : lambda_(checked(lambda)), shifts_{ShiftState{0, lambda}, ShiftState{1, lambda}, ShiftState{2, lambda}} {}

    void process(const Interval& iv) {
        if (iv.length() != lambda_)
            throw InputError("interval " + to_string(iv) + " has length " + std::to_string(iv.length()) +
                             ", expected " + std::to_string(lambda_));
        for (auto& s : shifts_) s.process(iv);
        std::size_t live = 0;
        for (const auto& s : shifts_) live += s.active_windows();
        peak_windows_ = std::max(peak_windows_, live);
    }

    /// Shift with the largest solution; ties go to the smallest shift.
    int best_shift() const noexcept {
        int best = 0;
        for (int a = 1; a < 3; ++a)
            if (shifts_[a].solution_size() > shifts_[best].solution_size()) best = a;
        return best;
    }

    std::vector<Interval> solution() const { return shifts_[best_shift()].solution(); }
    std::size_t solution_size() const noexcept { return shifts_[best_shift()].solution_size(); }

    const ShiftState& shift(int a) const { return shifts_.at(a); }
    Coord lambda() const noexcept { return lambda_; }
    std::size_t peak_windows() const noexcept { return peak_windows_; }

private:
    static Coord checked(Coord lambda) {
        if (lambda < 1) throw ParameterError("lambda must be >= 1");
        return lambda;
    }

    Coord lambda_;
    std::array<ShiftState, 3> shifts_;
    std::size_t peak_windows_ = 0;
};

} // namespace streamsel
