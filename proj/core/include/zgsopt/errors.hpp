#pragma once

#include <stdexcept>
#include <string>

namespace zgs {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed input: bad edge list, duplicate edge, nonpositive weight, bad config value.
struct ValidationError : Error {
    using Error::Error;
};

/// Graph (or a schedule segment) is not connected.
struct ConnectivityError : ValidationError {
    using ValidationError::ValidationError;
};

/// An algorithm parameter violates a theorem range (eta, p, T_m, k).
struct ParameterError : Error {
    using Error::Error;
};

/// Numerical routine failed to converge (eigensolver, Newton iteration cap).
struct NumericalError : Error {
    using Error::Error;
};

/// Finite-difference check of a declared derivative failed.
struct DerivativeError : Error {
    using Error::Error;
};

/// Sampled Hessian is not positive definite on the declared box.
struct ConvexityError : Error {
    using Error::Error;
};

/// Per-agent Hessian solve failed (local loss of positive definiteness).
struct SingularHessianError : NumericalError {
    using NumericalError::NumericalError;
};

/// A structural assumption of the selected variant does not hold
/// (e.g. non-identical Hessians in the time-varying algorithm).
struct AssumptionError : Error {
    using Error::Error;
};

/// A state component became non-finite during integration.
struct DivergenceError : NumericalError {
    using NumericalError::NumericalError;
};

}  // namespace zgs
