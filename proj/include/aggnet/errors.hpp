#pragma once

#include <stdexcept>
#include <string>

namespace aggnet {

// Invalid user input: malformed files, bad parameters, broken preconditions.
// The CLI maps this to exit code 2.
struct InputError : std::runtime_error {
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure: singular systems, failed convergence, identity violations.
// The CLI maps this to exit code 3.
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace aggnet
