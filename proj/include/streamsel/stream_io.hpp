#pragma once

// Text stream format, one interval per line:
//
//   # comment
//   n 10
//   1 3
//   2 11 oo
//
// The optional header `n <int>` fixes the universe {1..n}; without it n is the
// largest endpoint seen. The optional third token gives left/right openness
// (`c` closed, `o` open) and defaults to `cc`.

#include <algorithm>
#include <charconv>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "interval.hpp"

namespace streamsel {

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

inline Coord parse_coord(std::string_view tok, std::size_t line_no) {
    Coord v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
        throw ParseError(line_no, "expected an integer, got '" + std::string(tok) + "'");
    return v;
}

} // namespace detail

inline Instance parse_stream(std::istream& in) {
    Instance inst;
    inst.n_declared = false;
    Coord max_endpoint = 0;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto toks = detail::split_ws(line);
        if (toks.empty() || toks[0].front() == '#') continue;

        if (toks[0] == "n") {
            if (toks.size() != 2) throw ParseError(line_no, "header must be `n <int>`");
            if (inst.n_declared) throw ParseError(line_no, "duplicate `n` header");
            if (!inst.intervals.empty())
                throw ParseError(line_no, "`n` header must precede all intervals");
            inst.n = detail::parse_coord(toks[1], line_no);
            if (inst.n < 1) throw DomainError("line " + std::to_string(line_no) + ": n must be >= 1");
            inst.n_declared = true;
            continue;
        }

        if (toks.size() != 2 && toks.size() != 3)
            throw ParseError(line_no, "expected `<left> <right> [cc|co|oc|oo]`");
        Interval iv;
        iv.left = detail::parse_coord(toks[0], line_no);
        iv.right = detail::parse_coord(toks[1], line_no);
        if (toks.size() == 3) {
            auto f = toks[2];
            if (f.size() != 2 || (f[0] != 'c' && f[0] != 'o') || (f[1] != 'c' && f[1] != 'o'))
                throw ParseError(line_no, "openness flag must be one of cc, co, oc, oo");
            iv.left_open = f[0] == 'o';
            iv.right_open = f[1] == 'o';
        }
        try {
            iv.validate();
        } catch (const DomainError& e) {
            throw DomainError("line " + std::to_string(line_no) + ": " + e.what());
        }
        if (iv.left < 1 || (inst.n_declared && iv.right > inst.n))
            throw DomainError("line " + std::to_string(line_no) + ": endpoint outside [1, " +
                              (inst.n_declared ? std::to_string(inst.n) : std::string("n")) + "]");
        max_endpoint = std::max(max_endpoint, iv.right);
        inst.intervals.push_back(iv);
    }
    if (!inst.n_declared) inst.n = std::max<Coord>(1, max_endpoint);
    return inst;
}

inline Instance parse_stream(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_stream(in);
}

inline std::string format_interval(const Interval& iv) {
    std::string s = std::to_string(iv.left) + " " + std::to_string(iv.right);
    if (!iv.closed()) {
        s += ' ';
        s += iv.left_open ? 'o' : 'c';
        s += iv.right_open ? 'o' : 'c';
    }
    return s;
}

/// Canonical text form: header line, then one interval per line, `cc` omitted.
inline std::string format_stream(const Instance& inst) {
    std::string out = "n " + std::to_string(inst.n) + "\n";
    for (const auto& iv : inst.intervals) {
        out += format_interval(iv);
        out += '\n';
    }
    return out;
}

} // namespace streamsel
