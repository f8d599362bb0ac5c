#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mixedosc/errors.hpp"
#include "mixedosc/mixed_feedback.hpp"

namespace mixedosc {

/// Piecewise-constant reference: a constant baseline or a train of
/// non-overlapping pulses. Right-continuous at discontinuities.
class ReferenceSignal {
public:
    static ReferenceSignal constant(double value);
    static ReferenceSignal pulse_train(std::vector<double> amplitudes, std::vector<double> starts,
                                       std::vector<double> durations, double baseline = 0.0);

    double operator()(double t) const;
    const std::vector<double>& discontinuities() const noexcept { return discontinuities_; }

private:
    double baseline_ = 0.0;
    std::vector<double> amplitudes_;
    std::vector<double> starts_;
    std::vector<double> ends_;
    std::vector<double> discontinuities_;
};

struct SimTrace {
    std::vector<double> t;
    std::vector<Eigen::VectorXd> x;
    std::vector<double> y;
    std::vector<double> r;

    struct Meta {
        std::string method = "dopri5";
        double tol = 1e-6;
        double max_step = 0.0;
        int accepted_steps = 0;
        int rejected_steps = 0;
    } meta;

    std::size_t size() const noexcept { return t.size(); }
};

/// Adaptive integration aborted (step underflow); carries the partial trace.
class IntegrationFailure : public Error {
public:
    IntegrationFailure(const std::string& what, std::shared_ptr<SimTrace> partial)
        : Error(what), partial_(std::move(partial)) {}
    const SimTrace& partial() const { return *partial_; }

private:
    std::shared_ptr<SimTrace> partial_;
};

/// Dormand-Prince 4(5) integration of the closed loop over [0, T]. The step
/// size never exceeds one tenth of the fastest open-loop time constant, and
/// steps restart exactly at reference discontinuities.
SimTrace integrate(const ClosedLoopSystem& sys, const Eigen::VectorXd& x0,
                   const ReferenceSignal& r, double T, double tol = 1e-6);

enum class VerdictKind { Converged, Oscillating, SwitchedEquilibrium, Undetermined };

struct OscillationVerdict {
    VerdictKind kind = VerdictKind::Undetermined;
    double value = 0.0;          // Converged: terminal mean
    double amplitude = 0.0;      // Oscillating: steady peak-to-peak
    double period = 0.0;         // Oscillating: mean inter-peak interval
    double old_value = 0.0;      // SwitchedEquilibrium
    double new_value = 0.0;      // SwitchedEquilibrium
    std::string diagnostics;
};

std::string to_string(VerdictKind kind);

/// Classifies the post-transient portion of a trace. When the reference has
/// discontinuities, the analysis window starts after the last one, and the
/// verdict compares against the pre-pulse steady state to detect switching
/// between attractors.
OscillationVerdict classify_trace(const SimTrace& trace, double transient_fraction = 0.5);

} // namespace mixedosc
