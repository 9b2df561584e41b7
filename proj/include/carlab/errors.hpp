#pragma once

#include <stdexcept>

namespace carlab {

/// Bad arguments or malformed inputs (CLI exit code 2).
struct InvalidInput : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A configured cap (point count, matrix size, ...) would be exceeded (CLI exit code 3).
struct ResourceLimit : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A numeric routine could not reach its tolerance.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace carlab
