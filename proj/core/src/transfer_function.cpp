#include "mixedosc/transfer_function.hpp"

#include <cmath>

#include "mixedosc/errors.hpp"

namespace mixedosc {

TransferFunction::TransferFunction(Polynomial num, Polynomial den)
    : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw InvalidInput("TransferFunction: zero denominator");
    if (den_.degree() < 1) throw InvalidInput("TransferFunction: denominator degree must be >= 1");
}

std::complex<double> TransferFunction::operator()(std::complex<double> s) const {
    const std::complex<double> d = den_(s);
    // Relative pole-proximity guard: den(s) vanishes linearly near a simple
    // pole, so compare against the coefficient scale times |s| powers.
    double scale = den_.max_abs_coeff() * std::max(1.0, std::pow(std::abs(s), den_.degree()));
    if (std::abs(d) <= 1e-12 * scale)
        throw NumericalSingularity("TransferFunction: evaluation at a pole");
    return num_(s) / d;
}

std::vector<std::complex<double>> TransferFunction::zeros() const {
    if (num_.is_zero() || num_.degree() < 1) return {};
    return roots(num_);
}

TransferFunction TransferFunction::normalized() const {
    const double lead = den_.leading();
    return TransferFunction(num_ * (1.0 / lead), den_ * (1.0 / lead));
}

TransferFunction TransferFunction::operator*(const TransferFunction& other) const {
    return TransferFunction(num_ * other.num_, den_ * other.den_);
}

TransferFunction TransferFunction::operator*(double c) const {
    return TransferFunction(num_ * c, den_);
}

TransferFunction TransferFunction::operator+(const TransferFunction& other) const {
    return TransferFunction(num_ * other.den_ + other.num_ * den_, den_ * other.den_);
}

bool TransferFunction::approx_equal(const TransferFunction& other, double tol) const {
    const TransferFunction a = normalized();
    const TransferFunction b = other.normalized();
    return a.num().approx_equal(b.num(), tol) && a.den().approx_equal(b.den(), tol);
}

TransferFunction first_order_lag(double tau) {
    if (tau <= 0.0) throw InvalidInput("first_order_lag: tau must be positive");
    return TransferFunction(Polynomial({1.0}), Polynomial({1.0, tau}));
}

namespace {

Polynomial from_roots(const std::vector<std::complex<double>>& rts, double lead) {
    Polynomial p({lead});
    std::vector<bool> used(rts.size(), false);
    for (std::size_t i = 0; i < rts.size(); ++i) {
        if (used[i]) continue;
        if (std::abs(rts[i].imag()) <= 1e-9 * std::max(1.0, std::abs(rts[i]))) {
            p = p * Polynomial({-rts[i].real(), 1.0});
            used[i] = true;
            continue;
        }
        // Pair with the closest conjugate to keep coefficients real.
        std::size_t mate = i;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = i + 1; j < rts.size(); ++j) {
            if (used[j]) continue;
            const double d = std::abs(rts[j] - std::conj(rts[i]));
            if (d < best) {
                best = d;
                mate = j;
            }
        }
        used[i] = true;
        used[mate] = true;
        const double re = 0.5 * (rts[i].real() + rts[mate].real());
        const double im = 0.5 * (std::abs(rts[i].imag()) + std::abs(rts[mate].imag()));
        p = p * Polynomial({re * re + im * im, -2.0 * re, 1.0});
    }
    return p;
}

} // namespace

TransferFunction minimal_form(const TransferFunction& g, double tol) {
    if (g.num().is_zero() || g.num().degree() < 1) return g;
    std::vector<std::complex<double>> zs = g.zeros();
    std::vector<std::complex<double>> ps = g.poles();
    bool cancelled = false;
    for (std::size_t i = 0; i < zs.size();) {
        bool hit = false;
        for (std::size_t j = 0; j < ps.size(); ++j) {
            if (std::abs(zs[i] - ps[j]) <= tol * std::max(1.0, std::abs(ps[j]))) {
                zs.erase(zs.begin() + static_cast<std::ptrdiff_t>(i));
                ps.erase(ps.begin() + static_cast<std::ptrdiff_t>(j));
                hit = true;
                cancelled = true;
                break;
            }
        }
        if (!hit) ++i;
    }
    if (!cancelled) return g;
    if (ps.empty())
        throw InvalidInput("minimal_form: cancellation removed every pole");
    return TransferFunction(from_roots(zs, g.num().leading()), from_roots(ps, g.den().leading()));
}

} // namespace mixedosc
