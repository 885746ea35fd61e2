#pragma once

#include <stdexcept>
#include <string>

namespace rmts {

// Base class for every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Operand dimensions do not match the operation's contract.
class ShapeError : public Error {
public:
    using Error::Error;
};

// A pivot (or a matrix that must be inverted) fell below the singularity
// threshold.
class SingularMatrixError : public Error {
public:
    using Error::Error;
};

// A recursion or trajectory does not converge / produced non-finite values.
class DivergenceError : public Error {
public:
    using Error::Error;
};

// An iterative numerical method exhausted its budget. Carries the best
// estimate obtained so far.
class NumericError : public Error {
public:
    NumericError(const std::string& what, double partial)
        : Error(what), partial_(partial) {}
    double partial_estimate() const { return partial_; }

private:
    double partial_ = 0.0;
};

// Argument outside the mathematical domain of the function.
class DomainError : public Error {
public:
    using Error::Error;
};

// Not enough observations for the requested statistic.
class InsufficientDataError : public Error {
public:
    using Error::Error;
};

// Operation not defined for the ensemble constraint it was called with.
class UnsupportedEnsembleError : public Error {
public:
    using Error::Error;
};

// Likelihood is degenerate (a conditional variance is exactly zero).
class DegenerateLikelihoodError : public Error {
public:
    using Error::Error;
};

// Optimizer could not start (non-finite objective at the initial point).
class InitializationError : public Error {
public:
    using Error::Error;
};

// Malformed series file. Message carries the offending line number.
class ParseError : public Error {
public:
    using Error::Error;
};

// Malformed experiment configuration. Message names the offending key.
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace rmts
