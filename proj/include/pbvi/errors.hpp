#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pbvi {

/// Malformed model text. Carries the 1-based line and column of the offending token.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg),
          line_(line),
          column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// Model violates a structural invariant (row sums, discount range, dimensions).
class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The embedded simplex failed on an LP that should always be solvable.
class LpError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A solver loop or LP-point search ran past its iteration guard.
class IterationLimitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace pbvi
