#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "mixedosc/state_space.hpp"
#include "mixedosc/transfer_function.hpp"

namespace mixedosc {

/// Monotone, slope-restricted, bounded static nonlinearity. The default is
/// phi(y) = M*tanh(y/M) (M = 1 reproduces plain tanh). Custom shapes are
/// monotone cubic interpolants of a sample table, constant outside the
/// table, with an analytic slope-in-[0,1] check.
class Saturation {
public:
    static Saturation tanh_default(double bound = 1.0);
    static Saturation from_table(std::vector<double> y, std::vector<double> phi);

    double operator()(double y) const;
    double slope(double y) const;
    double bound() const noexcept { return bound_; }
    bool is_tanh() const noexcept { return table_y_.empty(); }

private:
    Saturation() = default;

    double bound_ = 1.0;
    // Table form: nodes, values and Hermite slopes (empty for tanh).
    std::vector<double> table_y_;
    std::vector<double> table_phi_;
    std::vector<double> table_slope_;
};

/// Design surface of the mixed-feedback loop: overall gain k, balance beta,
/// fast/slow lag time constants and the (stable, strictly proper) plant.
struct MixedFeedbackParams {
    double k = 1.0;
    double beta = 0.5;
    double tau_p = 0.1;
    double tau_n = 1.0;
    TransferFunction plant;

    /// Throws InvalidInput on violated invariants. The time-scale check
    /// (every plant pole strictly left of both -1/tau_p and -1/tau_n) can
    /// be relaxed for experimentation.
    void validate(bool enforce_time_scale = true) const;
};

/// Controller transfer function plus its pole/zero structure.
struct ControllerInfo {
    TransferFunction tf;
    double pole_p = 0.0; // -1/tau_p, positive-feedback lag
    double pole_n = 0.0; // -1/tau_n, negative-feedback lag
    std::optional<double> zero; // empty exactly at beta = beta_star (zero at infinity)
    double beta_star = 0.0; // tau_p / (tau_p + tau_n)
};

/// C(s,k,beta) = k*((beta(tau_n+tau_p)-tau_p) s + 2 beta - 1) /
///              ((tau_p s + 1)(tau_n s + 1)).
ControllerInfo make_controller(double k, double beta, double tau_p, double tau_n);

/// Loop transfer function of the Lure form: G(s,k,beta) = -C(s,k,beta) P(s).
TransferFunction make_loop_tf(const MixedFeedbackParams& params);

/// State-feedback row equivalent to the (k, beta) selection, for the state
/// ordering (plant states..., x_p, x_n): [0 ... 0, k*beta, -k*(1-beta)].
Eigen::RowVectorXd feedback_row(double k, double beta, int plant_order);

/// Closed loop xdot = A x + B1 phi(K x) + r_inject * r(t). A is the open
/// loop (Hurwitz); the reference enters at the input of the linear block
/// (r_inject = -B1), which reproduces the scalar fixed-point equation
/// y/g + r = phi(y) with g = -K A^{-1} B1.
struct ClosedLoopSystem {
    Eigen::MatrixXd A;
    Eigen::VectorXd B1;
    Eigen::RowVectorXd C1;
    Eigen::RowVectorXd K;
    Saturation phi = Saturation::tanh_default();
    Eigen::VectorXd r_inject;
    // Optional uncertainty/interconnection port (empty when unused).
    Eigen::VectorXd B2;
    Eigen::RowVectorXd C2;

    int order() const noexcept { return static_cast<int>(A.rows()); }
    bool has_port() const noexcept { return B2.size() > 0; }

    Eigen::VectorXd derivative(const Eigen::VectorXd& x, double r) const;
    Eigen::MatrixXd jacobian(const Eigen::VectorXd& x) const;
    /// DC gain of the linear loop component, -K A^{-1} B1.
    double dc_loop_gain() const;
};

struct AssembleOptions {
    bool enforce_time_scale = true;
    bool default_port = true; // install B2 = [0...0, 1/tau_p, 1/tau_n]^T, C2 = C1
};

ClosedLoopSystem assemble_closed_loop(const MixedFeedbackParams& params,
                                      const Saturation& phi = Saturation::tanh_default(),
                                      const AssembleOptions& options = {});

/// General form: explicit plant realization and feedback row.
ClosedLoopSystem assemble_closed_loop(const StateSpace& plant, double tau_p, double tau_n,
                                      const Eigen::RowVectorXd& K,
                                      const Saturation& phi = Saturation::tanh_default(),
                                      const AssembleOptions& options = {});

} // namespace mixedosc
