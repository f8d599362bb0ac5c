#include "mixedosc/mixed_feedback.hpp"

#include <algorithm>
#include <cmath>

#include "mixedosc/errors.hpp"
#include "mixedosc/linalg.hpp"

namespace mixedosc {

namespace {

// Interior extremum of the Hermite derivative on one interval; the
// derivative is quadratic in the normalized coordinate t.
void hermite_slope_range(double m0, double m1, double d, double& lo, double& hi) {
    const double a = 3.0 * (m0 + m1) - 6.0 * d;
    const double b = -4.0 * m0 - 2.0 * m1 + 6.0 * d;
    const double c = m0;
    lo = std::min(m0, m1);
    hi = std::max(m0, m1);
    if (std::abs(a) > 1e-300) {
        const double t = -b / (2.0 * a);
        if (t > 0.0 && t < 1.0) {
            const double v = (a * t + b) * t + c;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
}

} // namespace

Saturation Saturation::tanh_default(double bound) {
    if (bound <= 0.0) throw InvalidInput("Saturation: bound must be positive");
    Saturation s;
    s.bound_ = bound;
    return s;
}

Saturation Saturation::from_table(std::vector<double> y, std::vector<double> phi) {
    if (y.size() != phi.size() || y.size() < 2)
        throw InvalidInput("Saturation: table needs >= 2 matching samples");
    for (std::size_t i = 1; i < y.size(); ++i) {
        if (y[i] <= y[i - 1]) throw InvalidInput("Saturation: table abscissae must increase");
        if (phi[i] < phi[i - 1]) throw InvalidInput("Saturation: table must be nondecreasing");
    }

    const std::size_t n = y.size();
    std::vector<double> secant(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) secant[i] = (phi[i + 1] - phi[i]) / (y[i + 1] - y[i]);

    // Monotone Hermite slopes (harmonic mean), then clamp into [0, 1].
    std::vector<double> slope(n, 0.0);
    slope[0] = secant[0];
    slope[n - 1] = secant[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (secant[i - 1] <= 0.0 || secant[i] <= 0.0)
            slope[i] = 0.0;
        else
            slope[i] = 2.0 * secant[i - 1] * secant[i] / (secant[i - 1] + secant[i]);
    }
    for (double& m : slope) m = std::clamp(m, 0.0, 1.0);

    for (std::size_t i = 0; i + 1 < n; ++i) {
        double lo, hi;
        hermite_slope_range(slope[i], slope[i + 1], secant[i], lo, hi);
        if (lo < -1e-12 || hi > 1.0 + 1e-12)
            throw InvalidInput("Saturation: table violates the slope bound [0, 1]");
        if (secant[i] > 1.0 + 1e-12)
            throw InvalidInput("Saturation: table secant slope exceeds 1");
    }

    Saturation s;
    s.bound_ = 0.0;
    for (double v : phi) s.bound_ = std::max(s.bound_, std::abs(v));
    if (s.bound_ <= 0.0) throw InvalidInput("Saturation: table is identically zero");
    s.table_y_ = std::move(y);
    s.table_phi_ = std::move(phi);
    s.table_slope_ = std::move(slope);
    return s;
}

double Saturation::operator()(double y) const {
    if (is_tanh()) return bound_ * std::tanh(y / bound_);
    if (y <= table_y_.front()) return table_phi_.front();
    if (y >= table_y_.back()) return table_phi_.back();
    const auto it = std::upper_bound(table_y_.begin(), table_y_.end(), y);
    const std::size_t i = static_cast<std::size_t>(it - table_y_.begin()) - 1;
    const double h = table_y_[i + 1] - table_y_[i];
    const double t = (y - table_y_[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * table_phi_[i] + (t3 - 2 * t2 + t) * h * table_slope_[i] +
           (-2 * t3 + 3 * t2) * table_phi_[i + 1] + (t3 - t2) * h * table_slope_[i + 1];
}

double Saturation::slope(double y) const {
    if (is_tanh()) {
        const double th = std::tanh(y / bound_);
        return 1.0 - th * th;
    }
    if (y <= table_y_.front() || y >= table_y_.back()) return 0.0;
    const auto it = std::upper_bound(table_y_.begin(), table_y_.end(), y);
    const std::size_t i = static_cast<std::size_t>(it - table_y_.begin()) - 1;
    const double h = table_y_[i + 1] - table_y_[i];
    const double t = (y - table_y_[i]) / h;
    const double d = (table_phi_[i + 1] - table_phi_[i]) / h;
    const double m0 = table_slope_[i], m1 = table_slope_[i + 1];
    return m0 * (3 * t * t - 4 * t + 1) + m1 * (3 * t * t - 2 * t) + d * (6 * t - 6 * t * t);
}

void MixedFeedbackParams::validate(bool enforce_time_scale) const {
    if (k < 0.0) throw InvalidInput("MixedFeedbackParams: k must be >= 0");
    if (beta < 0.0 || beta > 1.0) throw InvalidInput("MixedFeedbackParams: beta must be in [0, 1]");
    if (tau_p <= 0.0 || tau_n <= 0.0)
        throw InvalidInput("MixedFeedbackParams: time constants must be positive");
    if (tau_p == tau_n) throw InvalidInput("MixedFeedbackParams: tau_p must differ from tau_n");
    if (!plant.strictly_proper())
        throw InvalidInput("MixedFeedbackParams: plant must be strictly proper");
    const auto poles = plant.poles();
    for (const auto& p : poles)
        if (p.real() >= 0.0)
            throw InvalidInput("MixedFeedbackParams: plant must be asymptotically stable");
    if (enforce_time_scale) {
        const double controller_edge = -std::max(1.0 / tau_p, 1.0 / tau_n);
        for (const auto& p : poles)
            if (p.real() >= controller_edge)
                throw InvalidInput(
                    "MixedFeedbackParams: plant poles must lie strictly left of both controller poles");
    }
}

ControllerInfo make_controller(double k, double beta, double tau_p, double tau_n) {
    if (k < 0.0 || beta < 0.0 || beta > 1.0 || tau_p <= 0.0 || tau_n <= 0.0 || tau_p == tau_n)
        throw InvalidInput("make_controller: parameter out of range");
    ControllerInfo info{
        TransferFunction(Polynomial({k * (2.0 * beta - 1.0), k * (beta * (tau_n + tau_p) - tau_p)}),
                         Polynomial({1.0, tau_p + tau_n, tau_p * tau_n})),
        -1.0 / tau_p,
        -1.0 / tau_n,
        std::nullopt,
        tau_p / (tau_p + tau_n)};
    const double slope_coeff = beta * (tau_p + tau_n) - tau_p;
    if (std::abs(slope_coeff) > 1e-14 * (tau_p + tau_n))
        info.zero = -(2.0 * beta - 1.0) / slope_coeff;
    return info;
}

TransferFunction make_loop_tf(const MixedFeedbackParams& params) {
    params.validate();
    const ControllerInfo c = make_controller(params.k, params.beta, params.tau_p, params.tau_n);
    return -(c.tf * params.plant);
}

Eigen::RowVectorXd feedback_row(double k, double beta, int plant_order) {
    if (plant_order < 0) throw InvalidInput("feedback_row: negative plant order");
    Eigen::RowVectorXd K = Eigen::RowVectorXd::Zero(plant_order + 2);
    K(plant_order) = k * beta;
    K(plant_order + 1) = -k * (1.0 - beta);
    return K;
}

Eigen::VectorXd ClosedLoopSystem::derivative(const Eigen::VectorXd& x, double r) const {
    const double y1 = K.dot(x);
    return A * x + B1 * phi(y1) + r_inject * r;
}

Eigen::MatrixXd ClosedLoopSystem::jacobian(const Eigen::VectorXd& x) const {
    const double y1 = K.dot(x);
    return A + B1 * (phi.slope(y1) * K);
}

double ClosedLoopSystem::dc_loop_gain() const {
    Eigen::VectorXd w = A.partialPivLu().solve(B1);
    return -K.dot(w);
}

ClosedLoopSystem assemble_closed_loop(const MixedFeedbackParams& params, const Saturation& phi,
                                      const AssembleOptions& options) {
    params.validate(options.enforce_time_scale);
    // First-order plants b/(s + a) take the direct realization (-a, b, 1) so
    // the assembled matrices match the familiar lag form entrywise; higher
    // orders use the controllable canonical form.
    StateSpace plant_ss = [&]() {
        if (params.plant.den().degree() == 1 && params.plant.num().degree() == 0) {
            const double lead = params.plant.den().leading();
            const double a = params.plant.den().coeffs()[0] / lead;
            const double b = params.plant.num().coeffs()[0] / lead;
            return StateSpace(Eigen::MatrixXd::Constant(1, 1, -a),
                              Eigen::MatrixXd::Constant(1, 1, b),
                              Eigen::MatrixXd::Constant(1, 1, 1.0),
                              Eigen::MatrixXd::Zero(1, 1));
        }
        return to_state_space(params.plant);
    }();
    return assemble_closed_loop(plant_ss, params.tau_p, params.tau_n,
                                feedback_row(params.k, params.beta, plant_ss.order()), phi,
                                options);
}

ClosedLoopSystem assemble_closed_loop(const StateSpace& plant, double tau_p, double tau_n,
                                      const Eigen::RowVectorXd& K, const Saturation& phi,
                                      const AssembleOptions& options) {
    if (plant.inputs() != 1 || plant.outputs() != 1)
        throw InvalidInput("assemble_closed_loop: SISO plants only");
    if (plant.D(0, 0) != 0.0)
        throw InvalidInput("assemble_closed_loop: plant must be strictly proper");
    if (tau_p <= 0.0 || tau_n <= 0.0 || tau_p == tau_n)
        throw InvalidInput("assemble_closed_loop: bad time constants");
    const int n = plant.order();
    if (K.size() != n + 2) throw InvalidInput("assemble_closed_loop: K must have plant order + 2 entries");

    const auto plant_poles = plant.poles();
    if (options.enforce_time_scale) {
        const double controller_edge = -std::max(1.0 / tau_p, 1.0 / tau_n);
        for (const auto& p : plant_poles)
            if (p.real() >= controller_edge)
                throw InvalidInput("assemble_closed_loop: time-scale assumption violated "
                                   "(disable enforce_time_scale to experiment)");
    }
    for (const auto& p : plant_poles)
        if (p.real() >= 0.0)
            throw InvalidInput("assemble_closed_loop: open loop must be Hurwitz");

    ClosedLoopSystem sys;
    sys.A = Eigen::MatrixXd::Zero(n + 2, n + 2);
    sys.A.topLeftCorner(n, n) = plant.A;
    sys.A.block(n, 0, 1, n) = plant.C / tau_p;
    sys.A(n, n) = -1.0 / tau_p;
    sys.A.block(n + 1, 0, 1, n) = plant.C / tau_n;
    sys.A(n + 1, n + 1) = -1.0 / tau_n;

    sys.B1 = Eigen::VectorXd::Zero(n + 2);
    sys.B1.head(n) = plant.B.col(0);
    sys.C1 = Eigen::RowVectorXd::Zero(n + 2);
    sys.C1.head(n) = plant.C.row(0);
    sys.K = K;
    sys.phi = phi;
    sys.r_inject = -sys.B1;

    if (options.default_port) {
        sys.B2 = Eigen::VectorXd::Zero(n + 2);
        sys.B2(n) = 1.0 / tau_p;
        sys.B2(n + 1) = 1.0 / tau_n;
        sys.C2 = sys.C1;
    }
    return sys;
}

} // namespace mixedosc
