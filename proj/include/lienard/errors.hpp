#pragma once

#include <stdexcept>
#include <string>

namespace lienard {

/// Base class for all numerical failures raised by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Evaluation outside a declared domain (black-box domains, radicand
/// violations of the f-from-g construction, ...).
class DomainError : public Error {
public:
    DomainError(const std::string& what, double where)
        : Error(what), location(where) {}
    double location;
};

/// A kernel pole (root of w(w^2+w+k), cubic root of the G0 denominator,
/// v in {0, -1/A} of the k=0 branch) was hit or straddled.
class PoleError : public Error {
public:
    PoleError(const std::string& what, double where)
        : Error(what), location(where) {}
    double location;
};

/// Root bracketing failed: no sign change on the given interval.
class BracketError : public Error {
public:
    using Error::Error;
};

/// Adaptive quadrature hit its subdivision cap before reaching the
/// requested tolerance. Carries the best estimate and its error bound.
class AccuracyError : public Error {
public:
    AccuracyError(const std::string& what, double best, double bound)
        : Error(what), estimate(best), error_bound(bound) {}
    double estimate;
    double error_bound;
};

/// A coefficient function vanished (or blew up) where the construction
/// needs to divide by it.
class SingularError : public Error {
public:
    SingularError(const std::string& what, double where)
        : Error(what), location(where) {}
    double location;
};

/// Reference integration failed (step-size underflow, step cap).
/// Carries the last accepted state.
class IntegrationError : public Error {
public:
    IntegrationError(const std::string& what, double t, double x, double xdot)
        : Error(what), t_last(t), x_last(x), xdot_last(xdot) {}
    double t_last;
    double x_last;
    double xdot_last;
};

/// Query outside the covered range (time-series resampling, comparison
/// windows).
class RangeError : public Error {
public:
    using Error::Error;
};

} // namespace lienard
