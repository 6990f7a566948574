#ifndef SJQ_ERRORS_HPP
#define SJQ_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace sjq {

// Base class for all toolkit errors. Subclasses exist so call sites and
// tests can catch specific failure modes; the CLI maps any Error to exit
// code 2 when it comes from input handling and 1 from failed checks.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct InvalidInput : Error {
    using Error::Error;
};

// kahler
struct OddRank : Error {
    using Error::Error;
};
struct DegenerateInput : Error {
    using Error::Error;
};
struct SingularE : Error {
    using Error::Error;
};
struct InvalidTheta : Error {
    using Error::Error;
};
struct ShapeMismatch : Error {
    using Error::Error;
};

// causet
struct CycleDetected : Error {
    using Error::Error;
};
struct MalformedInput : Error {
    using Error::Error;
};

// sj_state
struct DimensionMismatch : Error {
    using Error::Error;
};
struct SingularOmega : Error {
    using Error::Error;
};

// fock
struct DegreeTooHigh : Error {
    using Error::Error;
};
struct NotPolynomial : Error {
    using Error::Error;
};
struct TruncationTooSmall : Error {
    using Error::Error;
};
struct NoClosedForm : Error {
    using Error::Error;
};

// symbols
struct ModeMismatch : Error {
    using Error::Error;
};

// cfield
struct NotExpandable : Error {
    using Error::Error;
};

}  // namespace sjq

#endif
