#pragma once

#include <stdexcept>
#include <string>

namespace hoi {

/// Base class for all errors raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Bad user input: invalid lattice element, subset, coupling index,
/// gate/dag/dytri spec, or malformed file content.
struct InvalidArgument : Error {
    using Error::Error;
};

/// A Mobius inversion was asked to evaluate a function on an element
/// for which no value was supplied.
struct MissingValue : Error {
    using Error::Error;
};

/// normalize() was handed an all-zero table.
struct DegenerateDistribution : Error {
    using Error::Error;
};

/// A log-probability was requested for a state (or conditioning event)
/// of probability zero and no explicit floor/epsilon was supplied.
struct ZeroProbability : Error {
    using Error::Error;
};

/// An empirical estimate could not be formed (empty or degenerate cell
/// with no pseudocount).
struct Unestimable : Error {
    using Error::Error;
};

/// Every bootstrap resample was unestimable.
struct SignificanceUnavailable : Error {
    using Error::Error;
};

}  // namespace hoi
