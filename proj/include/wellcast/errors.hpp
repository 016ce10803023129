#ifndef WELLCAST_ERRORS_HPP
#define WELLCAST_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace wellcast {

/// Base class for all toolkit errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Bad or missing configuration (CLI exit code 2).
struct ConfigError : Error {
    using Error::Error;
};

/// Malformed, inconsistent, or insufficient input data (CLI exit code 3).
struct DataError : Error {
    using Error::Error;
};

/// Numerical failure during fitting or forecasting (CLI exit code 4).
struct NumericError : Error {
    using Error::Error;
};

/// Column layout of a matrix does not match the expected key schema.
struct SchemaError : DataError {
    using DataError::DataError;
};

/// An injection schedule ran out before the requested forecast step.
struct ScheduleExhausted : DataError {
    using DataError::DataError;
};

} // namespace wellcast

#endif
