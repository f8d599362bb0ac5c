#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "mixedosc/transfer_function.hpp"

namespace mixedosc {

/// Real state-space system (A, B, C, D). Continuous time, n >= 1.
struct StateSpace {
    Eigen::MatrixXd A;
    Eigen::MatrixXd B;
    Eigen::MatrixXd C;
    Eigen::MatrixXd D;

    StateSpace(Eigen::MatrixXd A_, Eigen::MatrixXd B_, Eigen::MatrixXd C_, Eigen::MatrixXd D_);

    int order() const noexcept { return static_cast<int>(A.rows()); }
    int inputs() const noexcept { return static_cast<int>(B.cols()); }
    int outputs() const noexcept { return static_cast<int>(C.rows()); }

    /// C (sI - A)^{-1} B + D. Throws NumericalSingularity if sI - A is
    /// numerically singular.
    Eigen::MatrixXcd operator()(std::complex<double> s) const;

    std::vector<std::complex<double>> poles() const;
};

/// Series composition: output of first feeds input of second.
StateSpace series(const StateSpace& first, const StateSpace& second);

/// Parallel composition with per-branch signs: y = s1*y1 + s2*y2, shared input.
StateSpace parallel(const StateSpace& g1, const StateSpace& g2, double sign1 = 1.0,
                    double sign2 = 1.0);

StateSpace negate(const StateSpace& g);

/// Controllable canonical realization of a proper SISO transfer function.
StateSpace to_state_space(const TransferFunction& g);

/// Exact rational form of a SISO realization (Faddeev-LeVerrier).
TransferFunction to_transfer_function(const StateSpace& g);

} // namespace mixedosc
