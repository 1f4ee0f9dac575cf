#pragma once

#include <stdexcept>

namespace blockage {

// Closed form requested for a distribution it does not cover.
class UnsupportedDistributionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Problem size beyond the configured exact-computation cap.
class UnsupportedSizeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Scenario configuration failed schema validation.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace blockage
