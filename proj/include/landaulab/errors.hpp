#pragma once

#include <stdexcept>
#include <string>

namespace landaulab {

// Window endpoint closer than the configured margin to some Landau level.
struct EndpointOnLevel : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Discretized kernel has an eigenvalue outside [0,1] beyond tolerance.
struct SpectrumOutOfRange : std::runtime_error {
    explicit SpectrumOutOfRange(double lambda)
        : std::runtime_error("kernel eigenvalue out of [0,1]: " + std::to_string(lambda)),
          offending(lambda) {}
    double offending;
};

struct DimensionMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace landaulab
