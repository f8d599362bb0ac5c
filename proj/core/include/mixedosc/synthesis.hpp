#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mixedosc/dominance.hpp"
#include "mixedosc/lmi.hpp"

namespace mixedosc {

/// Everything needed to rebuild a design's LMI constraint set from scratch
/// (the certificate serializes this alongside the solution, so verification
/// never trusts stored residuals).
struct DesignSpec {
    std::string kind; // "nominal" | "robust" | "passive" | "pgain" | "passivity"
    std::vector<Eigen::MatrixXd> vertices; // open-loop A_i family
    Eigen::MatrixXd B1; // control column(s); empty for verify kinds
    Eigen::MatrixXd B2; // uncertainty/interconnection port, empty if unused
    Eigen::MatrixXd C2;
    Eigen::MatrixXd D2; // port feedthrough (verify kinds)
    double lambda = 0.0;
    double eps = 0.0;
    bool instability = false;
    double gamma = std::numeric_limits<double>::quiet_NaN();
    double mu = std::numeric_limits<double>::quiet_NaN();
    double alpha = std::numeric_limits<double>::quiet_NaN();
    std::optional<double> z_norm_bound; // nu: ||Z||^2 cap via Schur block
    std::optional<double> gain_cap;     // closed-loop p-gain cap at rate 0 on (B2, C2)
};

/// LMI problem for a design/verification spec. Shared by synthesis and by
/// certificate re-verification.
LMIProblem build_problem(const DesignSpec& spec);

struct DesignOptions {
    bool instability_constraint = true;
    std::optional<double> z_norm_bound;
    std::vector<Eigen::MatrixXd> extra_vertices;
    std::optional<double> gain_cap;
    std::optional<double> eps;
    std::uint64_t seed = 1;
    /// Re-solve with progressively tighter Z-norm caps until the DC loop
    /// gain -K A^{-1} B1 drops below 1 (unique unstable equilibrium).
    bool ensure_unique_equilibrium = false;
    /// Largest acceptable feedback magnitude before the polish loop tightens
    /// the Z-norm cap (plain feasibility can overshoot the gain scale).
    double gain_sanity = 1e4;
    /// Warm start (block values) overriding the built-in initial guess.
    std::optional<BlockValues> initial_guess;
};

struct DesignResult {
    DesignSpec spec;
    Eigen::MatrixXd Y;
    Eigen::MatrixXd Z;
    Eigen::MatrixXd P; // Y^{-1}
    Eigen::RowVectorXd K;
    Inertia inertia; // of Y
    std::vector<double> residuals;
    double dc_gain = 0.0; // -K A^{-1} B1 at the first (nominal) vertex
    DominanceCertificate certificate;
    std::uint64_t seed = 1;
};

/// State-feedback synthesis for 2-dominance with rate lambda (optionally
/// with the unstable-origin constraint, a Z-norm cap, extra convex-hull
/// vertices and a closed-loop gain cap). Throws PreconditionFailed unless
/// every vertex has exactly two eigenvalues right of -lambda; Infeasible /
/// InertiaMismatch on failure.
DesignResult design_2dominant(const Eigen::MatrixXd& A, const Eigen::VectorXd& B, double lambda,
                              const DesignOptions& options = {});

/// Robust version: the closed loop gets 2-gain <= gamma from the w-port
/// (B2) to the z-port (C2), so any uncertainty with 0-gain < 1/gamma
/// preserves 2-dominance by the small-gain argument.
DesignResult design_robust(const Eigen::MatrixXd& A, const Eigen::VectorXd& B1,
                           const Eigen::MatrixXd& B2, const Eigen::MatrixXd& C2, double lambda,
                           double gamma, const DesignOptions& options = {});

/// Passive-interconnection version: the closed loop is 2-passive from the
/// port with input-passivity shortage <= mu; mu must stay below the load's
/// output-passivity excess.
DesignResult design_passive(const Eigen::MatrixXd& A, const Eigen::VectorXd& B1,
                            const Eigen::MatrixXd& B2, const Eigen::MatrixXd& C2, double lambda,
                            double mu, const DesignOptions& options = {});

struct PrecompensatorResult {
    Eigen::MatrixXd Y0;
    Eigen::MatrixXd Z0;
    Eigen::MatrixXd K0;
    std::vector<double> residuals;
};

/// Pre-stabilizing feedback pushing all plant poles left of -lambda
/// (Y0 > 0); optionally with a gain-level block on (B0, C0).
PrecompensatorResult design_precompensator(const Eigen::MatrixXd& A0, const Eigen::MatrixXd& B0,
                                           double lambda,
                                           std::optional<double> gamma = std::nullopt,
                                           const Eigen::MatrixXd& C0 = Eigen::MatrixXd(),
                                           std::uint64_t seed = 1);

struct SupplyCertificate {
    DesignSpec spec;
    Eigen::MatrixXd P;
    Inertia inertia;
    std::vector<double> residuals;
};

/// P-form gain certificate: the LTI family (A_i, B, C, D) has p-gain <= gamma
/// at rate lambda with storage inertia equal to target. Throws Infeasible or
/// InertiaMismatch.
SupplyCertificate verify_p_gain(const std::vector<Eigen::MatrixXd>& vertices,
                                const Eigen::MatrixXd& B, const Eigen::MatrixXd& C,
                                const Eigen::MatrixXd& D, double lambda, double gamma,
                                const Inertia& target, std::optional<double> eps = std::nullopt,
                                std::uint64_t seed = 1);

/// P-form passivity certificate with output excess alpha (>= 0) and input
/// shortage mu.
SupplyCertificate verify_passivity(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                   const Eigen::MatrixXd& C, const Eigen::MatrixXd& D,
                                   double lambda, double alpha, double mu, const Inertia& target,
                                   std::optional<double> eps = std::nullopt,
                                   std::uint64_t seed = 1);

/// Congruence re-check of a design in the untransformed P-form: returns the
/// worst max-eigenvalue over all vertex inequalities evaluated with
/// P = Y^{-1} (must be < 0 for a sound certificate).
double recheck_untransformed(const DesignResult& result);

} // namespace mixedosc
