#include "mixedosc/cable.hpp"

#include <cmath>

#include "mixedosc/errors.hpp"
#include "mixedosc/frequency.hpp"

namespace mixedosc {

void CableParams::validate() const {
    if (segments < 1) throw InvalidInput("CableParams: need at least one segment");
    if (r1 <= 0.0 || r2 <= 0.0 || cm <= 0.0)
        throw InvalidInput("CableParams: r1, r2, cm must be positive");
}

std::complex<double> cable_admittance(const CableParams& params, std::complex<double> s) {
    params.validate();
    // Base case G1 = (cm r2 s + 1) / (cm r1 r2 s + r1 + r2).
    const std::complex<double> num = params.cm * params.r2 * s + 1.0;
    const std::complex<double> den = params.cm * params.r1 * params.r2 * s + params.r1 + params.r2;
    if (std::abs(den) == 0.0) throw NumericalSingularity("cable_admittance: pole");
    std::complex<double> g = num / den;
    for (int i = 2; i <= params.segments; ++i) {
        const std::complex<double> shunt = params.cm * s + 1.0 / params.r2 + g;
        if (std::abs(shunt) == 0.0) throw NumericalSingularity("cable_admittance: pole");
        const std::complex<double> total = params.r1 + 1.0 / shunt;
        if (std::abs(total) == 0.0) throw NumericalSingularity("cable_admittance: pole");
        g = 1.0 / total;
    }
    return g;
}

TransferFunction cable_tf(const CableParams& params) {
    params.validate();
    // Rational continued-fraction expansion: G_k = N_k / D_k.
    Polynomial N({1.0, params.cm * params.r2});
    Polynomial D({params.r1 + params.r2, params.cm * params.r1 * params.r2});
    for (int i = 2; i <= params.segments; ++i) {
        // shunt = cm s + 1/r2 + N/D = (cm s D + D/r2 + N) / D
        const Polynomial shunt_num =
            Polynomial({0.0, params.cm}) * D + D * (1.0 / params.r2) + N;
        // G = 1 / (r1 + D / shunt_num) = shunt_num / (r1 shunt_num + D)
        const Polynomial new_den = shunt_num * params.r1 + D;
        N = shunt_num;
        D = new_den;
    }
    return TransferFunction(N, D);
}

StateSpace cable_ss(const CableParams& params) {
    params.validate();
    const int n = params.segments;
    const double a_series = 1.0 / (params.r1 * params.cm);
    const double a_shunt = 1.0 / (params.r2 * params.cm);

    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        double diag = -a_shunt - a_series;     // leak plus upstream series link
        if (i + 1 < n) diag -= a_series;       // downstream series link
        A(i, i) = diag;
        if (i + 1 < n) {
            A(i, i + 1) = a_series;
            A(i + 1, i) = a_series;
        }
    }
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, 1);
    B(0, 0) = a_series;
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(1, n);
    C(0, 0) = -1.0 / params.r1;
    Eigen::MatrixXd D = Eigen::MatrixXd::Constant(1, 1, 1.0 / params.r1);
    return StateSpace(A, B, C, D);
}

PassivityEstimate passivity_excess(const CableParams& params, double lambda, bool certify,
                                   const FrequencyGrid& grid) {
    params.validate();
    const double rate_limit = 1.0 / (params.cm * params.r2);
    if (!(lambda < rate_limit))
        throw PreconditionFailed("passivity_excess: lambda must be below 1/(cm*r2)");

    const StateSpace ss = cable_ss(params);
    auto ratio = [&](double omega) {
        const std::complex<double> g = ss(std::complex<double>(-lambda, omega))(0, 0);
        const double mag2 = std::norm(g);
        if (mag2 == 0.0) return std::numeric_limits<double>::infinity();
        return g.real() / mag2;
    };
    const FrequencyExtremum e = minimize_over_grid(ratio, grid);

    PassivityEstimate out;
    out.alpha = e.value;
    out.omega_at_min = e.omega;
    if (certify && out.alpha > 0.0) {
        const double alpha_cert = out.alpha * 0.98;
        out.certificate = verify_passivity(ss.A, ss.B, ss.C, ss.D, lambda, alpha_cert, 0.0,
                                           Inertia{0, 0, params.segments});
    }
    return out;
}

double InterconnectedSystem::node_voltage(const Eigen::VectorXd& x, int node) const {
    if (node < 0 || node > cable_segments)
        throw InvalidInput("node_voltage: node out of range");
    if (node == 0) return sys.C2.dot(x); // oscillator membrane voltage
    return x(oscillator_order + node - 1);
}

InterconnectedSystem interconnect(const ClosedLoopSystem& osc, const CableParams& cable) {
    cable.validate();
    if (!osc.has_port() || osc.C2.size() != osc.order())
        throw InvalidInput("interconnect: oscillator must expose its current port (B2, C2)");

    const StateSpace lad = cable_ss(cable);
    const int no = osc.order();
    const int nc = lad.order();
    const int n = no + nc;

    // i0^a = -i0^b = -(C_c x_c + D_c v0), v0 = C2 x_osc.
    ClosedLoopSystem sys;
    sys.A = Eigen::MatrixXd::Zero(n, n);
    sys.A.topLeftCorner(no, no) = osc.A - osc.B2 * (lad.D(0, 0) * osc.C2);
    sys.A.topRightCorner(no, nc) = -osc.B2 * lad.C;
    sys.A.bottomLeftCorner(nc, no) = lad.B * osc.C2;
    sys.A.bottomRightCorner(nc, nc) = lad.A;

    sys.B1 = Eigen::VectorXd::Zero(n);
    sys.B1.head(no) = osc.B1;
    sys.C1 = Eigen::RowVectorXd::Zero(n);
    sys.C1.head(no) = osc.C1;
    sys.K = Eigen::RowVectorXd::Zero(n);
    sys.K.head(no) = osc.K;
    sys.phi = osc.phi;
    sys.r_inject = Eigen::VectorXd::Zero(n);
    sys.r_inject.head(no) = osc.r_inject;
    sys.B2 = Eigen::VectorXd::Zero(n);
    sys.B2.head(no) = osc.B2;
    sys.C2 = Eigen::RowVectorXd::Zero(n);
    sys.C2.head(no) = osc.C2;

    InterconnectedSystem out;
    out.sys = std::move(sys);
    out.oscillator_order = no;
    out.cable_segments = nc;
    return out;
}

} // namespace mixedosc
