#pragma once

#include <stdexcept>
#include <string>

namespace specball {

/// Bad arguments or configuration supplied by the caller.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Base for numerical failures raised while solving.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SingularJacobian : public SolverError {
public:
    using SolverError::SolverError;
};

/// Mass matrix (or projection Gram matrix) is not SPD.
class AssemblyFailure : public SolverError {
public:
    using SolverError::SolverError;
};

/// Non-finite coefficient-function value at a quadrature node or a non-finite ODE right-hand side.
class EvaluationError : public SolverError {
public:
    using SolverError::SolverError;
};

/// Newton iteration kept failing after the step size hit its floor.
class StiffFailure : public SolverError {
public:
    using SolverError::SolverError;
};

}  // namespace specball
