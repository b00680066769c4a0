#pragma once

#include <stdexcept>
#include <string>

namespace qpt {

// Invalid run configuration (CLI exit code 1).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Failed numeric consistency check (CLI exit code 2).
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// Photon-number cutoff too small for the requested state.
struct CutoffError : NumericError {
    explicit CutoffError(const std::string& msg) : NumericError(msg) {}
};

}  // namespace qpt
