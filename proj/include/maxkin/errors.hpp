#pragma once

#include <stdexcept>
#include <string>

namespace maxkin {

// Bad user-supplied configuration (CLI flags, config file, option conflicts).
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Parameter outside the domain of a closed-form expression.
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Root bisection exceeded its iteration cap; the requested tolerance is
// below what the floating representation can resolve.
struct NonConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Normalizing statistic of an ensemble collapsed below 1e-300.
struct DegenerateEnsemble : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Frequency grid for the Fourier metric is empty or contains 0.
struct GridError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Decay-rate fit has too few usable snapshots above the noise floor.
struct FitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Log-binned tail fit has fewer than the required nonempty bins.
struct InsufficientTailData : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Unscaled moments left the representable floating range.
struct NumericalOverflow : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace maxkin
