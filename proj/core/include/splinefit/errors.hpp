#pragma once

#include <stdexcept>
#include <string>

namespace splinefit {

/// Thrown when an input violates a documented precondition (bad grid,
/// mismatched lengths, unbound knots, empty subinterval, ...).
class invalid_input : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown by the fast solver path when its factorization breaks down;
/// callers are expected to fall back to a rank-robust method.
class solver_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace splinefit
