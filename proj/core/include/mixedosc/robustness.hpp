#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "mixedosc/dominance.hpp"
#include "mixedosc/equilibria.hpp"
#include "mixedosc/synthesis.hpp"

namespace mixedosc {

struct RobustnessReport {
    double delta_max = 0.0;                              // Nyquist inflation radius
    std::vector<std::pair<double, double>> weight_curve; // (omega, bound) samples
    double gamma_ins = 0.0;                              // instability-preservation gain
};

/// Admissible inflation radius of the shifted Nyquist locus before the
/// p=2 circle test fails: 1 + min_omega Re G(j*omega - lambda, k, beta).
/// Requires a nominal p=2 circle certificate (PreconditionFailed otherwise).
double dominance_margin(const MixedFeedbackParams& params, double lambda,
                        const FrequencyGrid& grid = {});

/// Pointwise admissible uncertainty magnitude delta / |C(j*omega - lambda)|
/// sampled on the omega grid. Requires delta <= dominance_margin.
std::vector<std::pair<double, double>> uncertainty_weight(const MixedFeedbackParams& params,
                                                          double lambda, double delta,
                                                          const std::vector<double>& omegas);

struct InstabilityGainResult {
    double gamma_ins = 0.0;
    double omega_at_sup = 0.0;
    bool preserved = false; // gamma_ins * declared uncertainty gain < 1
    std::optional<SupplyCertificate> certificate;
};

/// Gain of the closed-loop linearization at the origin seen from the
/// uncertainty port (frequency sweep), plus the small-gain verdict against a
/// declared uncertainty 0-gain bound. When certify is true an LMI
/// certificate at rate 0 (inertia = unstable count) is attached.
InstabilityGainResult instability_gain(const Eigen::MatrixXd& A_bar, const Eigen::MatrixXd& B2,
                                       const Eigen::MatrixXd& C2, double declared_delta_gain,
                                       bool certify = false, const FrequencyGrid& grid = {});

/// Equilibria of the loop whose plant DC gain is perturbed additively by
/// delta0 = Delta(0): roots of y/((k P(0) + delta0)(2 beta - 1)) + r = phi(y),
/// classified on the DC-shifted linearization.
std::vector<Equilibrium> perturbed_equilibria(const MixedFeedbackParams& params, double delta0,
                                              double r);

/// Loop transfer function of the plant perturbed by the additive, fast LTI
/// uncertainty Delta (all poles strictly left of -lambda; checked).
TransferFunction perturbed_loop_tf(const MixedFeedbackParams& params,
                                   const TransferFunction& delta, double lambda);

} // namespace mixedosc
