#pragma once

#include <stdexcept>
#include <string>

namespace levy_elliptic {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (non-finite input,
/// point outside the box, invalid measure parameters, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Requested regime has no solution (or no jumps, or no sample) and the caller
/// did not ask for an override.
class RefusedError : public Error {
public:
    using Error::Error;
};

/// Adaptive quadrature stopped refining before reaching its tolerance.
class QuadratureError : public Error {
public:
    using Error::Error;
};

/// Invalid run configuration; the message is anchored to the offending key.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace levy_elliptic
