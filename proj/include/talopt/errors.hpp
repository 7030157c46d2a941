#pragma once

#include <stdexcept>
#include <string>

namespace talopt {

/// Invalid or inconsistent configuration. The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Candidate vector does not match the expected encoding layout.
class EncodingError : public std::runtime_error {
public:
    explicit EncodingError(const std::string& what) : std::runtime_error(what) {}
};

/// Exhaustive enumeration would exceed the configured evaluation budget.
class BudgetError : public std::runtime_error {
public:
    explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace talopt
