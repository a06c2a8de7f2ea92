#pragma once

#include <stdexcept>
#include <string>

namespace ipalm {

// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Block count or tensor shape does not match.
class ShapeError : public Error {
public:
    using Error::Error;
};

// A parameter lies outside the domain where the step rules are valid.
class ParameterError : public Error {
public:
    using Error::Error;
};

// Lipschitz estimation failed (power iteration or backtracking ran out of rounds).
class EstimationError : public Error {
public:
    using Error::Error;
};

// Input data violates a precondition of the problem (e.g. negative NMF data).
class DataError : public Error {
public:
    using Error::Error;
};

// A problem invariant was broken by the caller (e.g. a fixed slot was modified).
class ContractError : public Error {
public:
    using Error::Error;
};

// Configuration could not be parsed. Carries the 1-based line number, 0 if not line-bound.
class ConfigError : public Error {
public:
    ConfigError(const std::string& what, int line = 0)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

}  // namespace ipalm
