#pragma once

#include <stdexcept>
#include <string>

namespace inveff {

// Bad configuration: unknown model names, mismatched bases, malformed
// config files. Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// The requested target functional has a (heuristically) divergent
// representer series, so the efficient estimator is undefined for it.
// Maps to CLI exit code 1.
class ConditionRefusal : public std::runtime_error {
public:
    explicit ConditionRefusal(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace inveff
