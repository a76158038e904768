#pragma once

#include <stdexcept>
#include <string>

namespace feller {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Mismatched dimensions between two values that must agree (span points,
/// basis weights, point coordinates, matrix shapes).
class DimensionError : public Error {
public:
    DimensionError(const std::string& what, std::size_t expected, std::size_t actual)
        : Error(what + " (expected " + std::to_string(expected) + ", got " +
                std::to_string(actual) + ")"),
          expected(expected),
          actual(actual) {}
    std::size_t expected;
    std::size_t actual;
};

/// Invalid configuration; `path` is a JSON pointer into the offending document.
class ConfigError : public Error {
public:
    ConfigError(std::string path, const std::string& what)
        : Error("config error at " + path + ": " + what), path(std::move(path)) {}
    std::string path;
};

/// Structurally valid input that violates a precondition of an operation
/// (unequal masses, isolated point, sign constraint, ...).
class DataError : public Error {
public:
    explicit DataError(const std::string& what) : Error(what) {}
};

}  // namespace feller
