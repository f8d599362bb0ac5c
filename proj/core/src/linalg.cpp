#include "mixedosc/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "mixedosc/errors.hpp"

namespace mixedosc {

std::vector<std::complex<double>> eigenvalues(const Eigen::MatrixXd& M) {
    if (M.rows() != M.cols()) throw InvalidInput("eigenvalues(): matrix must be square");
    if (M.rows() == 0) throw InvalidInput("eigenvalues(): empty matrix");
    Eigen::EigenSolver<Eigen::MatrixXd> solver(M, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw NumericalSingularity("eigenvalues(): QR iteration failed to converge");
    std::vector<std::complex<double>> out(M.rows());
    for (int i = 0; i < M.rows(); ++i) out[i] = solver.eigenvalues()(i);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return out;
}

double max_real_part(const std::vector<std::complex<double>>& eigs) {
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& e : eigs) m = std::max(m, e.real());
    return m;
}

SymmetricEigen symmetric_eigendecomposition(const Eigen::MatrixXd& S, double zero_tol) {
    if (S.rows() != S.cols()) throw InvalidInput("symmetric_eigendecomposition(): not square");
    const double norm = S.norm();
    const double defect = (S - S.transpose()).norm();
    if (defect > 1e-10 * std::max(norm, 1e-300))
        throw InvalidInput("symmetric_eigendecomposition(): symmetry defect too large");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(S);
    if (solver.info() != Eigen::Success)
        throw NumericalSingularity("symmetric_eigendecomposition(): solver failed");

    SymmetricEigen out;
    out.values = solver.eigenvalues(); // ascending
    const double spectral = std::max(std::abs(out.values(0)), std::abs(out.values(out.values.size() - 1)));
    const double cut = zero_tol * std::max(1.0, spectral);
    for (int i = 0; i < out.values.size(); ++i) {
        if (out.values(i) < -cut)
            ++out.inertia.neg;
        else if (out.values(i) > cut)
            ++out.inertia.pos;
        else
            ++out.inertia.zero;
    }
    return out;
}

Inertia inertia_of(const Eigen::MatrixXd& S, double zero_tol) {
    return symmetric_eigendecomposition(S, zero_tol).inertia;
}

Eigen::MatrixXd solve_lyapunov_like(const Eigen::MatrixXd& M, const Eigen::MatrixXd& Q) {
    if (M.rows() != M.cols() || Q.rows() != Q.cols() || M.rows() != Q.rows())
        throw InvalidInput("solve_lyapunov_like(): dimension mismatch");
    const int n = static_cast<int>(M.rows());
    Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd Kop(n * n, n * n);
    // vec(M X + X M^T) = (I (x) M + M (x) I) vec(X), column-major vec.
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            for (int l = 0; l < n; ++l)
                for (int k = 0; k < n; ++k)
                    Kop(j * n + i, l * n + k) = I(j, l) * M(i, k) + M(j, l) * I(i, k);
    Eigen::VectorXd rhs(n * n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) rhs(j * n + i) = -Q(i, j);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(Kop);
    if (!lu.isInvertible())
        throw NumericalSingularity("solve_lyapunov_like(): singular operator (eigenvalue pair sums to zero?)");
    Eigen::VectorXd x = lu.solve(rhs);
    Eigen::MatrixXd X(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) X(i, j) = x(j * n + i);
    // Symmetrize against roundoff when Q is symmetric.
    return 0.5 * (X + X.transpose());
}

} // namespace mixedosc
