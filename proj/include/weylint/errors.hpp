#pragma once

#include <stdexcept>
#include <string>

namespace weylint {

/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Unsupported family/size, bad truncation, empty quadrature, bad CLI input.
class ConfigurationError : public Error
{
public:
    using Error::Error;
};

/// Input is not an element of the algebra / group it claims to belong to.
class DomainError : public Error
{
public:
    using Error::Error;
};

/// Eigenvalue clustering could not separate restricted roots.
class DegeneracyError : public Error
{
public:
    using Error::Error;
};

/// Operation requires a regular element of A.
class SingularityError : public Error
{
public:
    using Error::Error;
};

/// Non-finite value produced (overflow at extreme chart coordinates).
class RangeError : public Error
{
public:
    using Error::Error;
};

/// Reduced side of the calibration is statistically zero.
class CalibrationError : public Error
{
public:
    using Error::Error;
};

/// Broken internal invariant; indicates a bug rather than bad input.
class InternalError : public Error
{
public:
    using Error::Error;
};

} // namespace weylint
