#pragma once

#include <stdexcept>
#include <string>

namespace dispersive {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operands built on different bases.
class BasisMismatch : public Error {
public:
    using Error::Error;
};

/// A physical or structural precondition is violated (zero detuning, wrong
/// qubit count, non-symmetric input, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Iterative numerics failed: eigensolver iteration cap, Fock cutoff cap.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// Bare-state labelling of an exact spectrum is ambiguous (overlap too low).
class ClassificationError : public Error {
public:
    using Error::Error;
};

/// Malformed run configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace dispersive
