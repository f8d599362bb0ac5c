#include "mixedosc/equilibria.hpp"

#include <algorithm>
#include <cmath>

#include "mixedosc/errors.hpp"
#include "mixedosc/linalg.hpp"

namespace mixedosc {

namespace {

constexpr double kStabilityDeadZone = 1e-8;
constexpr double kBoundaryTieTol = 1e-9;

// Scaled fixed-point function F(y) = y + g*(r - phi(y)); same roots as
// y/g + r - phi(y) but with bounded derivative 1 - g*dphi.
double fixed_point_scaled(double y, double g, double r, const Saturation& phi) {
    return y + g * (r - phi(y));
}

double refine_root(double lo, double hi, double g, double r, const Saturation& phi) {
    double flo = fixed_point_scaled(lo, g, r, phi);
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (hi - lo <= 1e-12 * std::max(1.0, std::abs(mid))) break;
        const double fmid = fixed_point_scaled(mid, g, r, phi);
        if ((flo <= 0.0) == (fmid <= 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    // Newton polish drives the residual to machine precision.
    double y = 0.5 * (lo + hi);
    for (int i = 0; i < 4; ++i) {
        const double f = fixed_point_scaled(y, g, r, phi);
        const double df = 1.0 - g * phi.slope(y);
        if (std::abs(df) < 1e-12) break;
        const double step = f / df;
        y -= step;
        if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(y))) break;
    }
    return y;
}

} // namespace

std::vector<Equilibrium> find_equilibria(const ClosedLoopSystem& sys, double r) {
    const double g = sys.dc_loop_gain();
    const Saturation& phi = sys.phi;

    std::vector<double> roots_y;
    if (g == 0.0) {
        roots_y.push_back(0.0);
    } else {
        const double span = std::abs(g) * (1.0 + std::abs(r)) * std::max(1.0, phi.bound()) + 1.0;
        const int grid_points = 10000;
        double prev_y = -span;
        double prev_f = fixed_point_scaled(prev_y, g, r, phi);
        for (int i = 1; i <= grid_points; ++i) {
            const double y = -span + 2.0 * span * static_cast<double>(i) / grid_points;
            const double f = fixed_point_scaled(y, g, r, phi);
            if (prev_f == 0.0) {
                roots_y.push_back(prev_y);
            } else if ((prev_f < 0.0) != (f < 0.0)) {
                roots_y.push_back(refine_root(prev_y, y, g, r, phi));
            }
            prev_y = y;
            prev_f = f;
        }
        if (prev_f == 0.0) roots_y.push_back(prev_y);
    }

    std::sort(roots_y.begin(), roots_y.end());
    // Merge numerically duplicated roots (tangency / endpoint repeats).
    roots_y.erase(std::unique(roots_y.begin(), roots_y.end(),
                              [](double a, double b) {
                                  return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(a));
                              }),
                  roots_y.end());

    Eigen::PartialPivLU<Eigen::MatrixXd> lu(sys.A);
    std::vector<Equilibrium> out;
    out.reserve(roots_y.size());
    for (double y1 : roots_y) {
        Equilibrium eq;
        eq.y1 = y1;
        eq.x = -lu.solve(sys.B1 * (phi(y1) - r));
        const EquilibriumClassification cls = classify_equilibrium(sys, eq.x);
        eq.stable = cls.stable;
        eq.eigenvalues = cls.eigenvalues;
        out.push_back(std::move(eq));
    }
    return out;
}

std::vector<Equilibrium> find_equilibria(const MixedFeedbackParams& params, double r) {
    return find_equilibria(assemble_closed_loop(params), r);
}

EquilibriumClassification classify_equilibrium(const ClosedLoopSystem& sys,
                                               const Eigen::VectorXd& xbar) {
    const double r_residual_scale = std::max(1.0, xbar.norm());
    // xbar must be an equilibrium for *some* constant reference; recover it
    // from the state equation along the r_inject direction.
    Eigen::VectorXd f0 = sys.A * xbar + sys.B1 * sys.phi(sys.K.dot(xbar));
    double r = 0.0;
    if (sys.r_inject.norm() > 0.0)
        r = -sys.r_inject.dot(f0) / sys.r_inject.squaredNorm();
    const Eigen::VectorXd residual = f0 + sys.r_inject * r;
    if (residual.norm() > 1e-8 * r_residual_scale)
        throw InvalidInput("classify_equilibrium: state does not satisfy the equilibrium equation");

    EquilibriumClassification out;
    out.eigenvalues = eigenvalues(sys.jacobian(xbar));
    const double max_re = max_real_part(out.eigenvalues);
    if (std::abs(max_re) <= kStabilityDeadZone)
        throw MarginalEquilibrium("classify_equilibrium: leading eigenvalue within the 1e-8 dead-zone");
    out.stable = max_re < 0.0;
    return out;
}

RegionLabel classify_region_with_bounds(const MixedFeedbackParams& params, double r, double k0,
                                        double k2) {
    const double k = params.k;
    // Boundary ties resolve toward the more conservative label.
    if (std::isfinite(k0) && std::abs(k - k0) <= kBoundaryTieTol * std::max(1.0, k0))
        return RegionLabel::ZeroDominant;
    if (std::isnan(k0)) return RegionLabel::NoCertificate;
    if (k < k0) return RegionLabel::ZeroDominant;

    if (std::isnan(k2)) return RegionLabel::NoCertificate;
    if (std::isfinite(k2) && std::abs(k - k2) <= kBoundaryTieTol * std::max(1.0, k2))
        return RegionLabel::NoCertificate;
    if (!(k < k2)) return RegionLabel::NoCertificate;

    const std::vector<Equilibrium> eqs = find_equilibria(params, r);
    const bool any_stable =
        std::any_of(eqs.begin(), eqs.end(), [](const Equilibrium& e) { return e.stable; });
    if (!any_stable) return RegionLabel::Oscillation;
    if (eqs.size() > 1) return RegionLabel::OscillationPlusFixedPoints;
    return RegionLabel::TwoDomStableEq;
}

RegionLabel classify_region(const MixedFeedbackParams& params, double lambda, double r,
                            const FrequencyGrid& grid) {
    const double k0 = k0_gain_bound(params.beta, params, grid);
    double k2 = std::numeric_limits<double>::quiet_NaN();
    k2 = k2_gain_bound(params.beta, lambda, params, grid);
    return classify_region_with_bounds(params, r, k0, k2);
}

} // namespace mixedosc
