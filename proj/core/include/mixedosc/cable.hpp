#pragma once

#include <complex>
#include <optional>

#include "mixedosc/mixed_feedback.hpp"
#include "mixedosc/state_space.hpp"
#include "mixedosc/synthesis.hpp"
#include "mixedosc/transfer_function.hpp"

namespace mixedosc {

/// Discretized-cable load: n segments of series resistance r1 with shunt
/// r2 || cm per node.
struct CableParams {
    int segments = 1;
    double r1 = 100.0;
    double r2 = 400.0;
    double cm = 1e-4;

    void validate() const;
};

/// Input admittance of the n-segment ladder via the continued-fraction
/// recursion; numerically robust at any order.
std::complex<double> cable_admittance(const CableParams& params, std::complex<double> s);

/// Expanded rational form (degree n). Coefficients grow quickly with n;
/// prefer cable_ss for computations beyond modest n.
TransferFunction cable_tf(const CableParams& params);

/// Ladder realization: states are the capacitor voltages, input v0,
/// output i0 = (v0 - v1)/r1 (feedthrough 1/r1). A is tridiagonal.
StateSpace cable_ss(const CableParams& params);

struct PassivityEstimate {
    double alpha = 0.0;                    // inf over omega of Re G / |G|^2
    double omega_at_min = 0.0;
    std::optional<SupplyCertificate> certificate;
};

/// Output-passivity excess of the shifted cable. Requires
/// lambda < 1/(cm*r2) (PreconditionFailed otherwise). When certify is true,
/// an LMI certificate at alpha slightly below the sweep estimate is attached.
PassivityEstimate passivity_excess(const CableParams& params, double lambda,
                                   bool certify = false, const FrequencyGrid& grid = {});

struct InterconnectedSystem {
    ClosedLoopSystem sys; // oscillator states first, then capacitor voltages
    int oscillator_order = 0;
    int cable_segments = 0;

    /// Node voltage v_i along the cable (v0 is the oscillator output).
    double node_voltage(const Eigen::VectorXd& x, int node) const;
};

/// Negative-feedback interconnection of the oscillator's current port with
/// the cable (v0 shared, i0^a = -i0^b). The oscillator must expose the port
/// (B2 = membrane current column, C2 = membrane voltage row).
InterconnectedSystem interconnect(const ClosedLoopSystem& osc, const CableParams& cable);

} // namespace mixedosc
