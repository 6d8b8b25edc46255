#pragma once

#include <stdexcept>
#include <string>

namespace mkcs {

// Malformed input: bad files, out-of-range indices, violated preconditions.
struct InputError : std::runtime_error {
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// A hard cap was exceeded. Callers asked for more work than the budget allows;
// we refuse explicitly instead of silently degrading to a heuristic.
struct BudgetError : std::runtime_error {
    explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mkcs
