#include "mixedosc/robustness.hpp"

#include <cmath>

#include "mixedosc/errors.hpp"
#include "mixedosc/linalg.hpp"

namespace mixedosc {

double dominance_margin(const MixedFeedbackParams& params, double lambda,
                        const FrequencyGrid& grid) {
    const TransferFunction loop = make_loop_tf(params);
    const CircleTestResult test = circle_criterion(loop, lambda, 1.0, grid);
    if (!test.ok || test.shifted_unstable_poles != 2)
        throw PreconditionFailed("dominance_margin: no nominal p=2 circle certificate");
    return 1.0 + test.attained_min_real;
}

std::vector<std::pair<double, double>> uncertainty_weight(const MixedFeedbackParams& params,
                                                          double lambda, double delta,
                                                          const std::vector<double>& omegas) {
    if (delta < 0.0) throw InvalidInput("uncertainty_weight: delta must be >= 0");
    if (delta > 0.0) {
        const double dmax = dominance_margin(params, lambda);
        if (delta > dmax + 1e-12)
            throw InvalidInput("uncertainty_weight: delta exceeds the dominance margin");
    }
    const ControllerInfo c = make_controller(params.k, params.beta, params.tau_p, params.tau_n);
    std::vector<std::pair<double, double>> out;
    out.reserve(omegas.size());
    for (double omega : omegas) {
        const std::complex<double> cv = c.tf(std::complex<double>(-lambda, omega));
        const double mag = std::abs(cv);
        out.emplace_back(omega, mag > 0.0 ? delta / mag : std::numeric_limits<double>::infinity());
    }
    return out;
}

InstabilityGainResult instability_gain(const Eigen::MatrixXd& A_bar, const Eigen::MatrixXd& B2,
                                       const Eigen::MatrixXd& C2, double declared_delta_gain,
                                       bool certify, const FrequencyGrid& grid) {
    const auto eigs = eigenvalues(A_bar);
    int unstable = 0;
    for (const auto& e : eigs) {
        if (std::abs(e.real()) <= 1e-8)
            throw PreconditionFailed("instability_gain: linearization is not hyperbolic");
        if (e.real() > 0.0) ++unstable;
    }

    InstabilityGainResult out;
    if (B2.size() == 0 || B2.norm() == 0.0) {
        out.gamma_ins = 0.0;
        out.preserved = true;
        return out;
    }

    const StateSpace lin(A_bar, B2, C2, Eigen::MatrixXd::Zero(C2.rows(), B2.cols()));
    FrequencyExtremum sup;
    try {
        sup = shifted_sup_magnitude(lin, 0.0, grid);
    } catch (const ShiftedAxisPole&) {
        throw PreconditionFailed("instability_gain: linearization is not hyperbolic");
    }
    out.gamma_ins = sup.value;
    out.omega_at_sup = sup.omega;
    out.preserved = out.gamma_ins * declared_delta_gain < 1.0;

    if (certify) {
        const int n = static_cast<int>(A_bar.rows());
        const double gamma_cert = out.gamma_ins * 1.05 + 1e-9;
        out.certificate = verify_p_gain({A_bar}, B2, C2,
                                        Eigen::MatrixXd::Zero(C2.rows(), B2.cols()), 0.0,
                                        gamma_cert, Inertia{unstable, 0, n - unstable});
    }
    return out;
}

std::vector<Equilibrium> perturbed_equilibria(const MixedFeedbackParams& params, double delta0,
                                              double r) {
    const ClosedLoopSystem nominal = assemble_closed_loop(params);
    const double g_nominal = nominal.dc_loop_gain(); // k P(0) (2 beta - 1)
    const double kp0 = params.k * params.plant(std::complex<double>(0.0, 0.0)).real();
    if (kp0 == 0.0)
        throw InvalidInput("perturbed_equilibria: nominal DC path k*P(0) must be nonzero");

    // DC-shifted gain with the nominal loop structure: scale the feedback row
    // so -K' A^{-1} B1 = (k P(0) + delta0)(2 beta - 1).
    const double ratio = (kp0 + delta0) / kp0;
    ClosedLoopSystem shifted = nominal;
    shifted.K = nominal.K * ratio;
    (void)g_nominal;
    return find_equilibria(shifted, r);
}

TransferFunction perturbed_loop_tf(const MixedFeedbackParams& params,
                                   const TransferFunction& delta, double lambda) {
    for (const auto& p : delta.poles())
        if (!(p.real() < -lambda))
            throw InvalidInput("perturbed_loop_tf: uncertainty must be fast "
                               "(all poles strictly left of -lambda)");
    if (!delta.strictly_proper())
        throw InvalidInput("perturbed_loop_tf: uncertainty must be strictly proper");
    MixedFeedbackParams perturbed = params;
    perturbed.plant = params.plant + delta;
    return make_loop_tf(perturbed);
}

} // namespace mixedosc
