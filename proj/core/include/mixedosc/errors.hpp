#pragma once

#include <stdexcept>
#include <string>

namespace mixedosc {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or out-of-contract input (dimension mismatch, bad ranges, ...).
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// Evaluation hit (or came numerically too close to) a pole.
class NumericalSingularity : public Error {
public:
    using Error::Error;
};

/// A pole sits on the shifted axis Re(s) = -lambda, so the shifted
/// frequency-domain tests are undefined.
class ShiftedAxisPole : public Error {
public:
    using Error::Error;
};

/// A structural precondition of the requested analysis does not hold
/// (e.g. the rate lambda does not split the spectrum two/rest).
class PreconditionFailed : public Error {
public:
    using Error::Error;
};

/// A synthesized Y (or P) came back with the wrong inertia.
class InertiaMismatch : public Error {
public:
    using Error::Error;
};

/// An equilibrium sits inside the stability dead-zone; the caller must
/// decide how to treat it.
class MarginalEquilibrium : public Error {
public:
    using Error::Error;
};

/// (A0, B0) is not controllable, so pre-compensation cannot place poles.
class UncontrollablePair : public Error {
public:
    using Error::Error;
};

/// LMI feasibility search failed; carries the best max-eigenvalue residual
/// reached over all constraints.
class Infeasible : public Error {
public:
    Infeasible(const std::string& what, double best_residual)
        : Error(what), best_residual_(best_residual) {}

    double best_residual() const noexcept { return best_residual_; }

private:
    double best_residual_;
};

} // namespace mixedosc
