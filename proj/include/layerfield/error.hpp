#pragma once

#include <stdexcept>
#include <string>

namespace layerfield {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Inputs violate a documented precondition (domain, geometry, data shape).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A truncated series or iterative solve could not reach the requested tolerance.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double achieved)
        : Error(what), achieved_(achieved) {}

    /// Best bound reached before giving up.
    double achieved() const noexcept { return achieved_; }

private:
    double achieved_;
};

/// The field representation cannot supply what an operation asks for
/// (e.g. derivatives beyond the finite-difference limit).
class CapabilityError : public Error {
public:
    using Error::Error;
};

/// Total-variation estimate did not stabilise under grid refinement.
class EstimationError : public Error {
public:
    using Error::Error;
};

/// Finite-difference solver failed to converge.
class SolverError : public Error {
public:
    using Error::Error;
};

} // namespace layerfield
