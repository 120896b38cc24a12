#pragma once

#include <stdexcept>
#include <string>

namespace qaffine {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Matrix or table sizes do not fit together.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// A precondition on the numerical content of an argument was violated.
class ContractError : public Error {
public:
    using Error::Error;
};

/// The matrix is not a density matrix (or the Bloch vector is outside the ball).
class InvalidStateError : public Error {
public:
    using Error::Error;
};

/// Count data cannot be normalized (all cells empty after processing).
class DegenerateDataError : public Error {
public:
    using Error::Error;
};

/// Threshold device removes every event: N * theta >= T.
class DeviceSaturatedError : public Error {
public:
    using Error::Error;
};

}  // namespace qaffine
