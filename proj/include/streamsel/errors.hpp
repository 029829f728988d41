#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace streamsel {

/// Malformed stream text. Carries the 1-based line number of the offending line.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Coordinates outside the declared universe, or an interval that is empty.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Bad algorithm parameters (eps out of range, lambda < 1, ...).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A stream item that violates an algorithm's input contract.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Exact oracles that only work on small instances.
class SizeError : public std::length_error {
public:
    using std::length_error::length_error;
};

} // namespace streamsel
