#pragma once

#include <stdexcept>
#include <string>

namespace csb {

/// Base class for all errors thrown by this library.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Input fails a mathematical precondition (non-unitary matrix, bad probability, ...).
class ValidationError : public Error {
  public:
    using Error::Error;
};

/// Request exceeds a hard resource cap (dense PTM width, synthesis width, ...).
class CapacityError : public Error {
  public:
    using Error::Error;
};

/// Target spectrum is fully degenerate; no unequal-phase eigenpair exists.
class DegeneracyError : public Error {
  public:
    using Error::Error;
};

/// Hard cycle cannot carry a Pauli frame (randomized compiling).
class UnsupportedCycleError : public Error {
  public:
    using Error::Error;
};

/// Experiment configuration violates the schema.
class ConfigError : public Error {
  public:
    using Error::Error;
};

} // namespace csb
