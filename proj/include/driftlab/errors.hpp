#pragma once

#include <stdexcept>
#include <string>

namespace drift {

// Invalid or inconsistent configuration; maps to CLI exit code 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Failures during execution (bad input files, divergence, unwritable
// output); maps to CLI exit code 3.
struct RuntimeFailure : std::runtime_error {
    explicit RuntimeFailure(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace drift
