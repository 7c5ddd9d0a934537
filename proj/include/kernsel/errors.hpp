#pragma once

#include <stdexcept>
#include <string>

namespace kernsel {

// Invalid configuration: bad family setup, unavailable penalty rule,
// mismatched grids. Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid data: malformed input files, non-finite samples, values outside
// the kernel domain. Maps to CLI exit code 3.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Evaluation point outside the kernel's domain.
class DomainError : public DataError {
public:
    explicit DomainError(const std::string& msg) : DataError(msg) {}
};

// Adaptive integration failed to reach the requested tolerance.
class QuadratureError : public std::runtime_error {
public:
    explicit QuadratureError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace kernsel
