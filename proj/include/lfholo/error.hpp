#pragma once

#include <stdexcept>
#include <string>

namespace lfholo {

/// Base of every error thrown by the library. Each subclass maps to one CLI
/// exit code (see tools/lfholo.cpp).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shapes, grids or domains of operands do not agree.
class StructuralError : public Error {
public:
    using Error::Error;
};

/// An argument lies outside the physically meaningful range.
class DomainError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// Non-finite values appeared during optimization.
class NumericalError : public Error {
public:
    using Error::Error;
};

} // namespace lfholo
