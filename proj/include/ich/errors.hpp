#pragma once

#include <stdexcept>

namespace ich {

// Error taxonomy shared across the library. The CLI maps these onto process
// exit codes: validation/config/shape/range -> 2, numeric -> 3, I/O -> 4.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ShapeError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

struct ValidationError : Error {
    using Error::Error;
};

struct RangeError : Error {
    using Error::Error;
};

struct NumericError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

// Thrown when an AUC is requested for a single-class label vector; callers
// that build reports catch it and record the value as absent.
struct UndefinedAucError : Error {
    using Error::Error;
};

}  // namespace ich
