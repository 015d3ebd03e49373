// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace oam {

// Base of every error thrown by the library. The CLI maps these to exit
// code 2 (validation) and anything else to exit code 1.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

// Least-squares fit could not be set up (too few or degenerate samples).
class FitError : public Error {
public:
    using Error::Error;
};

// Root bracket without a sign change.
class BracketError : public Error {
public:
    using Error::Error;
};

// Lens or beam geometry that has no physical solution (ray misses the lens,
// feed angle beyond the hyperbola asymptote, no half-power crossing, ...).
class GeometryError : public Error {
public:
    using Error::Error;
};

// Malformed configuration, CSV or JSON input.
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace oam
