#include "mixedosc/frequency.hpp"

#include <algorithm>
#include <cmath>

#include "mixedosc/errors.hpp"
#include "mixedosc/linalg.hpp"

namespace mixedosc {

namespace {

constexpr double kAxisPoleTol = 1e-6;
constexpr double kPointPoleTol = 1e-9;

void require_off_axis(const std::vector<std::complex<double>>& poles, double lambda) {
    for (const auto& p : poles) {
        if (std::abs(p.real() + lambda) <= kAxisPoleTol)
            throw ShiftedAxisPole("pole real part within 1e-6 of the shifted axis");
    }
}

void require_point_clear(const std::vector<std::complex<double>>& poles,
                         std::complex<double> s) {
    for (const auto& p : poles) {
        if (std::abs(s - p) <= kPointPoleTol)
            throw NumericalSingularity("frequency_response: evaluation at a pole");
    }
}

// Golden-section search for the minimum of f on [a, b].
FrequencyExtremum golden_refine(const std::function<double(double)>& f, double a, double b,
                                double rel_tol) {
    constexpr double invphi = 0.6180339887498949;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while ((b - a) > rel_tol * std::max({1e-12, std::abs(a), std::abs(b)})) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        }
    }
    return f1 <= f2 ? FrequencyExtremum{x1, f1} : FrequencyExtremum{x2, f2};
}

template <class Sys>
FrequencyExtremum sweep_min(const Sys& g, double lambda, const FrequencyGrid& grid,
                            bool magnitude) {
    require_off_axis(g.poles(), lambda);
    auto f = [&](double omega) {
        const std::complex<double> v = g(std::complex<double>(-lambda, omega));
        return magnitude ? -std::abs(v) : v.real();
    };
    return minimize_over_grid(f, grid);
}

} // namespace

std::vector<double> FrequencyGrid::values() const {
    if (points < 2 || omega_min <= 0.0 || omega_max <= omega_min)
        throw InvalidInput("FrequencyGrid: need points >= 2 and 0 < omega_min < omega_max");
    std::vector<double> out(points);
    const double l0 = std::log(omega_min), l1 = std::log(omega_max);
    for (int i = 0; i < points; ++i)
        out[i] = std::exp(l0 + (l1 - l0) * static_cast<double>(i) / (points - 1));
    out.front() = omega_min;
    out.back() = omega_max;
    return out;
}

FrequencyExtremum minimize_over_grid(const std::function<double(double)>& f,
                                     const FrequencyGrid& grid, double rel_tol) {
    std::vector<double> omegas = grid.values();
    omegas.insert(omegas.begin(), 0.0);

    int best = 0;
    double best_val = f(omegas[0]);
    for (std::size_t i = 1; i < omegas.size(); ++i) {
        const double v = f(omegas[i]);
        if (v < best_val) {
            best_val = v;
            best = static_cast<int>(i);
        }
    }
    const double lo = omegas[static_cast<std::size_t>(std::max(0, best - 1))];
    const double hi = omegas[std::min(omegas.size() - 1, static_cast<std::size_t>(best + 1))];
    FrequencyExtremum refined = golden_refine(f, lo, hi, rel_tol);
    if (refined.value < best_val) return refined;
    return {omegas[static_cast<std::size_t>(best)], best_val};
}

std::complex<double> frequency_response(const TransferFunction& g, double omega, double lambda) {
    const std::complex<double> s(-lambda, omega);
    require_point_clear(g.poles(), s);
    return g(s);
}

std::complex<double> frequency_response(const StateSpace& g, double omega, double lambda) {
    if (g.inputs() != 1 || g.outputs() != 1)
        throw InvalidInput("frequency_response: SISO systems only");
    const std::complex<double> s(-lambda, omega);
    require_point_clear(g.poles(), s);
    return g(s)(0, 0);
}

FrequencyExtremum shifted_min_real(const TransferFunction& g, double lambda,
                                   const FrequencyGrid& grid) {
    return sweep_min(g, lambda, grid, /*magnitude=*/false);
}

FrequencyExtremum shifted_min_real(const StateSpace& g, double lambda, const FrequencyGrid& grid) {
    if (g.inputs() != 1 || g.outputs() != 1)
        throw InvalidInput("shifted_min_real: SISO systems only");
    auto scalar = [&](std::complex<double> s) { return g(s)(0, 0); };
    require_off_axis(g.poles(), lambda);
    auto f = [&](double omega) { return scalar(std::complex<double>(-lambda, omega)).real(); };
    return minimize_over_grid(f, grid);
}

FrequencyExtremum shifted_sup_magnitude(const TransferFunction& g, double lambda,
                                        const FrequencyGrid& grid) {
    FrequencyExtremum e = sweep_min(g, lambda, grid, /*magnitude=*/true);
    return {e.omega, -e.value};
}

FrequencyExtremum shifted_sup_magnitude(const StateSpace& g, double lambda,
                                        const FrequencyGrid& grid) {
    if (g.inputs() != 1 || g.outputs() != 1)
        throw InvalidInput("shifted_sup_magnitude: SISO systems only");
    require_off_axis(g.poles(), lambda);
    auto f = [&](double omega) {
        return -std::abs(g(std::complex<double>(-lambda, omega))(0, 0));
    };
    FrequencyExtremum e = minimize_over_grid(f, grid);
    return {e.omega, -e.value};
}

int count_poles_right_of(const std::vector<std::complex<double>>& poles, double x) {
    int count = 0;
    for (const auto& p : poles) {
        if (std::abs(p.real() - x) <= kAxisPoleTol)
            throw ShiftedAxisPole("pole real part within 1e-6 of the dividing line");
        if (p.real() > x) ++count;
    }
    return count;
}

int count_poles_right_of(const TransferFunction& g, double x) {
    return count_poles_right_of(g.poles(), x);
}

int count_poles_right_of(const StateSpace& g, double x) {
    return count_poles_right_of(g.poles(), x);
}

} // namespace mixedosc
