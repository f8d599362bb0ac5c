#pragma once

#include <algorithm>
#include <complex>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "mixedosc/mixed_feedback.hpp"
#include "mixedosc/polynomial.hpp"

namespace testutil {

/// First-order-lag loop used throughout: plant 1/(0.01 s + 1), tau_p = 0.1,
/// tau_n = 1 (strong time-scale separation).
inline mixedosc::MixedFeedbackParams lag_params(double k, double beta, double tau_l = 0.01,
                                                double tau_p = 0.1, double tau_n = 1.0) {
    return mixedosc::MixedFeedbackParams{k, beta, tau_p, tau_n,
                                         mixedosc::first_order_lag(tau_l)};
}

/// Characteristic polynomial det(sI - M) by Laplace expansion over
/// polynomial entries; independent of the eigenvalue kernel.
inline mixedosc::Polynomial char_poly(const Eigen::MatrixXd& M) {
    using mixedosc::Polynomial;
    const int n = static_cast<int>(M.rows());
    std::vector<std::vector<Polynomial>> entries(n, std::vector<Polynomial>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            entries[i][j] = (i == j) ? Polynomial({-M(i, j), 1.0}) : Polynomial({-M(i, j)});

    std::function<Polynomial(const std::vector<std::vector<Polynomial>>&)> det =
        [&](const std::vector<std::vector<Polynomial>>& a) -> Polynomial {
        const int m = static_cast<int>(a.size());
        if (m == 1) return a[0][0];
        Polynomial acc;
        for (int col = 0; col < m; ++col) {
            std::vector<std::vector<Polynomial>> minor(m - 1, std::vector<Polynomial>(m - 1));
            for (int i = 1; i < m; ++i) {
                int mj = 0;
                for (int j = 0; j < m; ++j) {
                    if (j == col) continue;
                    minor[i - 1][mj++] = a[i][j];
                }
            }
            Polynomial term = a[0][col] * det(minor);
            acc = (col % 2 == 0) ? acc + term : acc - term;
        }
        return acc;
    };
    return det(entries);
}

/// Greedy matching distance between two complex multisets.
inline double match_distance(std::vector<std::complex<double>> a,
                             std::vector<std::complex<double>> b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (const auto& va : a) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_i = 0;
        for (std::size_t i = 0; i < b.size(); ++i) {
            const double d = std::abs(va - b[i]);
            if (d < best) {
                best = d;
                best_i = i;
            }
        }
        worst = std::max(worst, best);
        b.erase(b.begin() + static_cast<std::ptrdiff_t>(best_i));
    }
    return worst;
}

inline Eigen::MatrixXd random_matrix(std::mt19937& rng, int n, double scale = 1.0) {
    std::uniform_real_distribution<double> dist(-scale, scale);
    Eigen::MatrixXd M(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) M(i, j) = dist(rng);
    return M;
}

inline Eigen::MatrixXd random_symmetric(std::mt19937& rng, int n, double scale = 1.0) {
    Eigen::MatrixXd M = random_matrix(rng, n, scale);
    return 0.5 * (M + M.transpose());
}

/// Nominal state matrices of the first-order-lag loop with
/// tau_l = 0.01, tau_p = 0.1, tau_n = 1.
inline Eigen::MatrixXd nominal_A() {
    Eigen::MatrixXd A(3, 3);
    A << -100.0, 0.0, 0.0, 10.0, -10.0, 0.0, 1.0, 0.0, -1.0;
    return A;
}

inline Eigen::VectorXd nominal_B() {
    Eigen::VectorXd B(3);
    B << 100.0, 0.0, 0.0;
    return B;
}

} // namespace testutil
