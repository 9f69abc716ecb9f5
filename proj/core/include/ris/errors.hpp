#pragma once

#include <stdexcept>
#include <string>

namespace ris {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad user input: malformed configs, invalid geometry, violated preconditions.
class InputError : public Error {
public:
    using Error::Error;
};

/// A computation could not produce a trustworthy number.
class NumericError : public Error {
public:
    using Error::Error;
};

class GeometryError : public InputError {
public:
    using InputError::InputError;
};

class ConfigError : public InputError {
public:
    using InputError::InputError;
};

/// Argument outside the domain of a special function (zero, branch cut).
class DomainError : public NumericError {
public:
    using NumericError::NumericError;
};

class ConvergenceError : public NumericError {
public:
    using NumericError::NumericError;
};

/// The closed form cannot be used for this pair (rho too small); the caller
/// should switch to quadrature.
class DegenerateGeometry : public NumericError {
public:
    using NumericError::NumericError;
};

/// |sin(kh)| is too small for the sinusoidal-current normalization.
class ResonantLength : public NumericError {
public:
    using NumericError::NumericError;
};

class SingularSystem : public NumericError {
public:
    using NumericError::NumericError;
};

} // namespace ris
