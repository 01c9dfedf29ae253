// errors.hpp: exception hierarchy shared by every qb module

#pragma once

#include <stdexcept>
#include <string>

namespace qb {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad user input: invalid sector size, out-of-range index, malformed parameter.
struct InvalidArgument : Error {
    using Error::Error;
};

// Binary operation between objects living on different Hilbert-space layouts.
struct LayoutError : Error {
    using Error::Error;
};

// Requested combination is outside what the builders support (e.g. detuned
// interaction picture).
struct UnsupportedConfiguration : Error {
    using Error::Error;
};

// A numerical tolerance was violated during propagation or a state check.
struct AccuracyError : Error {
    using Error::Error;
};

// Population reached the top of the Fock truncation.
struct TruncationError : AccuracyError {
    using AccuracyError::AccuracyError;
};

// Configuration file / CLI override problems.
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace qb
