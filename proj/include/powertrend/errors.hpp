#pragma once

#include <stdexcept>
#include <string>

namespace powertrend {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or invalid input data (bad CSV row, non-positive price, ...).
class DataError : public Error {
public:
    using Error::Error;
};

/// Series too short for an indicator's warm-up.
class WarmupError : public DataError {
public:
    using DataError::DataError;
};

/// Invalid parameters (non-positive multiplier, zero window, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A computation that has no meaningful answer, e.g. zero variance in a regression.
class DegenerateError : public Error {
public:
    using Error::Error;
};

} // namespace powertrend
