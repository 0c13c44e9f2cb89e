#pragma once

#include <stdexcept>
#include <string>

namespace sitdyn {

// Thrown when a simulation loses positivity/finiteness or a stepper cannot
// make progress. CLI maps this to exit code 2.
class SimulationError : public std::runtime_error {
public:
    explicit SimulationError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown for malformed configuration input. CLI maps this to exit code 1.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sitdyn
