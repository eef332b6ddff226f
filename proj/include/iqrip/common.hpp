#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace iqrip {

/// Token identifier. The toy model assigns ids densely from 0 in first-appearance
/// order, but the core accepts arbitrary 64-bit ids.
using TokenId = std::int64_t;

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// An argument is outside its documented range (k = 0, p > 1, order < 2, ...).
struct ParameterError : Error {
    explicit ParameterError(const std::string& msg) : Error(msg) {}
};

/// Input data is malformed or inconsistent (bad JSON line, mismatched sets,
/// corpus too short, missing optional fields that an operation requires).
struct DataError : Error {
    explicit DataError(const std::string& msg) : Error(msg) {}
};

/// A numeric result is undefined on the given input (infinite KL divergence,
/// rank-frequency fit on fewer than two points, ...).
struct NumericError : Error {
    explicit NumericError(const std::string& msg) : Error(msg) {}
};

}  // namespace iqrip
