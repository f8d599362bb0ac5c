#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace mixedosc {

/// Signature triple of a symmetric matrix: counts of negative, (numerically)
/// zero, and positive eigenvalues. neg + zero + pos equals the dimension.
struct Inertia {
    int neg = 0;
    int zero = 0;
    int pos = 0;

    bool operator==(const Inertia&) const = default;
};

/// All eigenvalues of a square real matrix (dense QR method). Conjugate
/// pairs come out exactly symmetric.
std::vector<std::complex<double>> eigenvalues(const Eigen::MatrixXd& M);

double max_real_part(const std::vector<std::complex<double>>& eigs);

struct SymmetricEigen {
    Eigen::VectorXd values; // ascending
    Inertia inertia;
};

/// Eigendecomposition of a symmetric matrix plus inertia count.
/// zero_tol is a relative factor: |lambda| <= zero_tol * max(1, ||S||_2)
/// classifies as zero. Throws InvalidInput when the symmetry defect
/// ||S - S^T|| exceeds 1e-10 * ||S||.
SymmetricEigen symmetric_eigendecomposition(const Eigen::MatrixXd& S, double zero_tol = 1e-8);

Inertia inertia_of(const Eigen::MatrixXd& S, double zero_tol = 1e-8);

/// Unique solution X of X*M + M*X^T = -Q for hyperbolic M (no pair of
/// eigenvalues summing to zero). Used to seed dominance LMIs: the solution
/// inherits inertia (#right-half-plane eigenvalues of M as negatives).
Eigen::MatrixXd solve_lyapunov_like(const Eigen::MatrixXd& M, const Eigen::MatrixXd& Q);

} // namespace mixedosc
