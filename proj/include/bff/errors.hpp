#pragma once

#include <stdexcept>
#include <string>

namespace bff {

// Malformed input text (edge lists, spec files). `line` is 1-based, 0 if n/a.
struct ParseError : std::runtime_error {
    int line;
    explicit ParseError(const std::string& what, int line_no = 0)
        : std::runtime_error(line_no > 0 ? "line " + std::to_string(line_no) + ": " + what
                                         : what),
          line(line_no) {}
};

// Precondition violations on otherwise well-formed data (empty node set,
// out-of-range id, bad k, ...).
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Exhaustive enumeration would exceed the configured oracle budget.
struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace bff
