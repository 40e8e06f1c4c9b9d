#pragma once

#include <stdexcept>
#include <string>

namespace cryptoforecast {

// Configuration problems: bad fields, missing keys, inconsistent settings.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Anything wrong with input data: parse failures, invariant violations,
// alignment failures, degenerate inputs.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

class ParseError : public DataError {
public:
    explicit ParseError(const std::string& msg) : DataError(msg) {}
};

class ValidationError : public DataError {
public:
    explicit ValidationError(const std::string& msg) : DataError(msg) {}
};

// Numerical failures: singular systems, zero variance, divergence.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// A referenced model file is absent or unreadable.
class ModelFileError : public std::runtime_error {
public:
    explicit ModelFileError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace cryptoforecast
