#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "mixedosc/dominance.hpp"
#include "mixedosc/mixed_feedback.hpp"

namespace mixedosc {

struct Equilibrium {
    double y1 = 0.0;           // equilibrium value of the feedback signal K x
    Eigen::VectorXd x;         // full state
    bool stable = false;
    std::vector<std::complex<double>> eigenvalues;
};

/// All closed-loop equilibria for constant reference r, from the scalar
/// fixed-point equation y/g + r = phi(y) with g = -K A^{-1} B1. Roots are
/// ascending in y1; for g <= 0 exactly one root exists. Throws
/// MarginalEquilibrium when a root's linearization sits in the +-1e-8
/// real-part dead-zone.
std::vector<Equilibrium> find_equilibria(const ClosedLoopSystem& sys, double r);
std::vector<Equilibrium> find_equilibria(const MixedFeedbackParams& params, double r);

struct EquilibriumClassification {
    bool stable = false;
    std::vector<std::complex<double>> eigenvalues;
};

/// Local stability of an equilibrium state via the Jacobian
/// A + B1 * dphi(K xbar) * K. Throws MarginalEquilibrium in the dead-zone.
EquilibriumClassification classify_equilibrium(const ClosedLoopSystem& sys,
                                               const Eigen::VectorXd& xbar);

/// Combines the k0/k2 circle certificates with the equilibrium inventory
/// into the five-region taxonomy of the (k, beta) plane.
RegionLabel classify_region(const MixedFeedbackParams& params, double lambda, double r,
                            const FrequencyGrid& grid = {});

/// Region label given precomputed gain bounds (used by the map sweep).
RegionLabel classify_region_with_bounds(const MixedFeedbackParams& params, double r, double k0,
                                        double k2);

} // namespace mixedosc
