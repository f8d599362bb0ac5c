#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "mixedosc/state_space.hpp"
#include "mixedosc/transfer_function.hpp"

namespace mixedosc {

/// Log-spaced frequency grid used by all shifted-axis extremum searches.
/// omega = 0 is always evaluated in addition to the grid, and the grid
/// optimum is polished by golden-section refinement.
struct FrequencyGrid {
    double omega_min = 1e-4;
    double omega_max = 1e6;
    int points = 4000;

    std::vector<double> values() const;
};

struct FrequencyExtremum {
    double omega = 0.0;
    double value = 0.0;
};

/// G(j*omega - lambda) for a SISO system. Throws NumericalSingularity when
/// the evaluation point is within 1e-9 of a pole.
std::complex<double> frequency_response(const TransferFunction& g, double omega, double lambda = 0.0);
std::complex<double> frequency_response(const StateSpace& g, double omega, double lambda = 0.0);

/// min over omega of Re G(j*omega - lambda). Throws ShiftedAxisPole when a
/// pole's real part is within 1e-6 of -lambda.
FrequencyExtremum shifted_min_real(const TransferFunction& g, double lambda,
                                   const FrequencyGrid& grid = {});
FrequencyExtremum shifted_min_real(const StateSpace& g, double lambda,
                                   const FrequencyGrid& grid = {});

/// sup over omega of |G(j*omega - lambda)| (LTI p-gain estimate).
FrequencyExtremum shifted_sup_magnitude(const TransferFunction& g, double lambda,
                                        const FrequencyGrid& grid = {});
FrequencyExtremum shifted_sup_magnitude(const StateSpace& g, double lambda,
                                        const FrequencyGrid& grid = {});

/// Number of poles with real part > x, multiplicity counted. Throws
/// ShiftedAxisPole when a pole's real part is within 1e-6 of x.
int count_poles_right_of(const TransferFunction& g, double x);
int count_poles_right_of(const StateSpace& g, double x);
int count_poles_right_of(const std::vector<std::complex<double>>& poles, double x);

/// Grid + golden-section minimization of f over [0, grid.omega_max],
/// exposed for sweep-style oracles built on custom scalar responses.
FrequencyExtremum minimize_over_grid(const std::function<double(double)>& f,
                                     const FrequencyGrid& grid, double rel_tol = 1e-8);

} // namespace mixedosc
