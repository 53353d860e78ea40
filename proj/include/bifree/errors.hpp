#ifndef BIFREE_ERRORS_HPP
#define BIFREE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace bifree {

// Root of the library's exception hierarchy. The two branches matter for
// callers: PreconditionError means the input violates a documented
// hypothesis, InternalError means an invariant that is a theorem for valid
// inputs failed (an arithmetic bug, not a user error).
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

class InternalError : public Error {
public:
    using Error::Error;
};

// Constant term vanishes where a unit series is required.
class NotAUnitError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

// Inner series of a composition has a nonzero constant term.
class CompositionBaseError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

// Series is not compositionally invertible (f(0) != 0 or f'(0) == 0).
class NotInvertibleError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

// A monomial division hit a nonvanishing boundary coefficient. Carries the
// offending index pair (j == -1 for univariate series).
class NotDivisibleError : public InternalError {
public:
    NotDivisibleError(const std::string& what, long i, long j = -1)
        : InternalError(what), index_i(i), index_j(j) {}
    long index_i;
    long index_j;
};

// A first moment required to be nonzero vanishes.
class ZeroMeanError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

// Operator application left the truncated monomial box of an oracle model.
class DegreeOverflowError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

// Newton iteration failed to reach tolerance; caller should resample.
class NonConvergenceError : public Error {
public:
    using Error::Error;
};

// Malformed input file or series of the wrong kind (1- vs 2-variable).
class ParseError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

class KindMismatchError : public ParseError {
public:
    using ParseError::ParseError;
};

// Moment data violating a structural requirement (e.g. m[0][0] != 1).
class InvalidMomentsError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

}  // namespace bifree

#endif
