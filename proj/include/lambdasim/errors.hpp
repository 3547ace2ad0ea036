// errors.hpp — Error types shared across the library.
#pragma once

#include <stdexcept>
#include <string>

namespace lambdasim {

// A state constructor would silently discard more probability than allowed.
struct TruncationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The time integrator failed its stationarity certificate. Carries the worst
// offender so callers can report which block/detuning has not settled.
struct NonConvergenceError : std::runtime_error {
    NonConvergenceError(const std::string& msg, double drift, int block, double det)
        : std::runtime_error(msg), worst_drift(drift), block_m(block), detuning(det) {}
    double worst_drift{0.0};
    int block_m{0};
    double detuning{0.0};
};

// Malformed scenario/config input (maps to CLI exit code 2).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace lambdasim
