#ifndef CHRONICLE_ERRORS_HPP
#define CHRONICLE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace chronicle {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed documents, configs, or mutator expressions.
struct ParseError : Error {
    using Error::Error;
};

// Inputs that parse but violate a model/automaton invariant
// (bad row sums, alphabet mismatches, unknown symbols, ...).
struct ValidationError : Error {
    using Error::Error;
};

// The story cannot be recorded with probability 1 from the initial state.
struct UnachievableError : Error {
    using Error::Error;
};

// Value iteration ran out of iterations before reaching tolerance.
struct ConvergenceError : Error {
    ConvergenceError(const std::string& what, double residual)
        : Error(what), residual(residual) {}
    double residual;
};

// A filter update was asked to condition on a zero-likelihood observation.
struct ImpossibleObservationError : Error {
    using Error::Error;
};

// Violated internal invariant; indicates a bug, not a bad input.
struct InternalError : Error {
    using Error::Error;
};

}  // namespace chronicle

#endif
