#pragma once

#include <stdexcept>
#include <string>

namespace tierline {

/// Invalid or inconsistent configuration input.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Inputs are well-formed but the requested operating point cannot be met
/// (e.g., a latency target below the zero-load service latency).
struct InfeasibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace tierline
