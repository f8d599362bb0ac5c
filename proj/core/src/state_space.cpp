#include "mixedosc/state_space.hpp"

#include <cmath>

#include "mixedosc/errors.hpp"
#include "mixedosc/linalg.hpp"

namespace mixedosc {

StateSpace::StateSpace(Eigen::MatrixXd A_, Eigen::MatrixXd B_, Eigen::MatrixXd C_,
                       Eigen::MatrixXd D_)
    : A(std::move(A_)), B(std::move(B_)), C(std::move(C_)), D(std::move(D_)) {
    if (A.rows() < 1 || A.rows() != A.cols()) throw InvalidInput("StateSpace: A must be square, n >= 1");
    if (B.rows() != A.rows()) throw InvalidInput("StateSpace: B row count mismatch");
    if (C.cols() != A.cols()) throw InvalidInput("StateSpace: C column count mismatch");
    if (D.rows() != C.rows() || D.cols() != B.cols())
        throw InvalidInput("StateSpace: D dimension mismatch");
}

Eigen::MatrixXcd StateSpace::operator()(std::complex<double> s) const {
    const int n = order();
    Eigen::MatrixXcd M = s * Eigen::MatrixXcd::Identity(n, n) - A.cast<std::complex<double>>();
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(M);
    Eigen::MatrixXcd X = lu.solve(B.cast<std::complex<double>>());
    if (!X.allFinite()) throw NumericalSingularity("StateSpace: evaluation at a pole");
    return C.cast<std::complex<double>>() * X + D.cast<std::complex<double>>();
}

std::vector<std::complex<double>> StateSpace::poles() const { return eigenvalues(A); }

StateSpace series(const StateSpace& first, const StateSpace& second) {
    if (second.inputs() != first.outputs())
        throw InvalidInput("series: output/input dimension mismatch");
    const int n1 = first.order(), n2 = second.order();
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n1 + n2, n1 + n2);
    A.topLeftCorner(n1, n1) = first.A;
    A.bottomLeftCorner(n2, n1) = second.B * first.C;
    A.bottomRightCorner(n2, n2) = second.A;
    Eigen::MatrixXd B(n1 + n2, first.inputs());
    B.topRows(n1) = first.B;
    B.bottomRows(n2) = second.B * first.D;
    Eigen::MatrixXd C(second.outputs(), n1 + n2);
    C.leftCols(n1) = second.D * first.C;
    C.rightCols(n2) = second.C;
    Eigen::MatrixXd D = second.D * first.D;
    return StateSpace(A, B, C, D);
}

StateSpace parallel(const StateSpace& g1, const StateSpace& g2, double sign1, double sign2) {
    if (g1.inputs() != g2.inputs() || g1.outputs() != g2.outputs())
        throw InvalidInput("parallel: dimension mismatch");
    const int n1 = g1.order(), n2 = g2.order();
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n1 + n2, n1 + n2);
    A.topLeftCorner(n1, n1) = g1.A;
    A.bottomRightCorner(n2, n2) = g2.A;
    Eigen::MatrixXd B(n1 + n2, g1.inputs());
    B.topRows(n1) = g1.B;
    B.bottomRows(n2) = g2.B;
    Eigen::MatrixXd C(g1.outputs(), n1 + n2);
    C.leftCols(n1) = sign1 * g1.C;
    C.rightCols(n2) = sign2 * g2.C;
    Eigen::MatrixXd D = sign1 * g1.D + sign2 * g2.D;
    return StateSpace(A, B, C, D);
}

StateSpace negate(const StateSpace& g) { return StateSpace(g.A, g.B, -g.C, -g.D); }

StateSpace to_state_space(const TransferFunction& g) {
    if (!g.proper()) throw InvalidInput("to_state_space: transfer function must be proper");
    const Polynomial den = g.den().monic();
    const Polynomial num = g.num() * (1.0 / g.den().leading());
    const int n = den.degree();

    // Split off the direct term for bi-proper inputs.
    double d = 0.0;
    Polynomial num_sp = num;
    if (!num.is_zero() && num.degree() == n) {
        d = num.coeffs()[n];
        num_sp = num - den * d;
    }

    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i + 1 < n; ++i) A(i, i + 1) = 1.0;
    for (int j = 0; j < n; ++j) A(n - 1, j) = -den.coeffs()[j];
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, 1);
    B(n - 1, 0) = 1.0;
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(1, n);
    for (int j = 0; j < n && j < static_cast<int>(num_sp.coeffs().size()); ++j)
        C(0, j) = num_sp.is_zero() ? 0.0 : num_sp.coeffs()[j];
    Eigen::MatrixXd D = Eigen::MatrixXd::Constant(1, 1, d);
    return StateSpace(A, B, C, D);
}

TransferFunction to_transfer_function(const StateSpace& g) {
    if (g.inputs() != 1 || g.outputs() != 1)
        throw InvalidInput("to_transfer_function: SISO systems only");
    const int n = g.order();

    // Faddeev-LeVerrier: den(s) = s^n + a_{n-1} s^{n-1} + ... + a_0 and
    // (sI - A)^{-1} = sum_k N_k s^{n-1-k} / den(s).
    std::vector<double> a(n + 1, 0.0);
    a[n] = 1.0;
    std::vector<Eigen::MatrixXd> N(n);
    N[0] = Eigen::MatrixXd::Identity(n, n);
    for (int k = 1; k <= n; ++k) {
        Eigen::MatrixXd AN = g.A * N[k - 1];
        a[n - k] = -AN.trace() / static_cast<double>(k);
        if (k < n) N[k] = AN + a[n - k] * Eigen::MatrixXd::Identity(n, n);
    }

    std::vector<double> den_coeffs(a);
    std::vector<double> num_coeffs(n + 1, 0.0);
    for (int k = 0; k < n; ++k) {
        const double ck = (g.C * N[k] * g.B)(0, 0);
        num_coeffs[n - 1 - k] += ck;
    }
    const double d = g.D(0, 0);
    for (int i = 0; i <= n; ++i) num_coeffs[i] += d * den_coeffs[i];
    return TransferFunction(Polynomial(std::move(num_coeffs)), Polynomial(std::move(den_coeffs)));
}

} // namespace mixedosc
