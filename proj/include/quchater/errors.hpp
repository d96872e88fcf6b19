#pragma once

#include <stdexcept>
#include <string>

namespace quchater {

/// Problems with input files, datasets or derived data (CLI exit code 2).
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Numeric failures that abort a computation (CLI exit code 3).
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --- dataset / preprocessing -------------------------------------------------

struct MalformedHeader : DataError {
    using DataError::DataError;
};
struct RaggedSeries : DataError {
    using DataError::DataError;
};
struct UnknownLabel : DataError {
    using DataError::DataError;
};
struct EmptySplit : DataError {
    using DataError::DataError;
};
struct AllMissing : DataError {
    using DataError::DataError;
};
struct TooManyLevels : DataError {
    using DataError::DataError;
};
struct WindowTooLarge : DataError {
    using DataError::DataError;
};
struct TooFewMinoritySamples : DataError {
    using DataError::DataError;
};

// --- numeric -----------------------------------------------------------------

struct OutOfDomain : NumericError {
    using NumericError::NumericError;
};
struct NonFiniteLoss : NumericError {
    using NumericError::NumericError;
};
struct SingularKernel : NumericError {
    using NumericError::NumericError;
};

// --- programming-contract violations ------------------------------------------

struct ShapeMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct LengthMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct DimensionTooSmall : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct IndexOutOfRange : std::out_of_range {
    using std::out_of_range::out_of_range;
};
struct ControlEqualsTarget : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

} // namespace quchater
