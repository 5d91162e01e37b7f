#pragma once

#include <stdexcept>
#include <string>

namespace nodal {

// Input outside the mathematical domain of an operation (x outside [0,1],
// resonant mode pair, ...).
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Eigenvalue / branch index out of range.
struct IndexError : std::out_of_range {
    using std::out_of_range::out_of_range;
};

// Invalid resolution, step or option value.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Stated hypotheses of an operation not met by the data.
struct PreconditionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Iteration failed to converge; carries the last residual.
struct NumericError : std::runtime_error {
    double residual;
    NumericError(const std::string& msg, double res)
        : std::runtime_error(msg), residual(res) {}
};

// A computed quantity violates an internal invariant (wrong node count, ...).
struct ConsistencyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace nodal
