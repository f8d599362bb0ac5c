#pragma once

#include <complex>
#include <vector>

#include "mixedosc/polynomial.hpp"

namespace mixedosc {

/// Rational SISO transfer function num(s)/den(s) with real coefficients.
/// den degree >= 1 and den nonzero; num may be the zero polynomial.
/// Coefficients are stored as given (no automatic normalization) so that
/// symbolically constructed forms stay bit-comparable.
class TransferFunction {
public:
    TransferFunction(Polynomial num, Polynomial den);

    const Polynomial& num() const noexcept { return num_; }
    const Polynomial& den() const noexcept { return den_; }

    bool strictly_proper() const noexcept { return num_.is_zero() || num_.degree() < den_.degree(); }
    bool proper() const noexcept { return num_.is_zero() || num_.degree() <= den_.degree(); }

    /// Pointwise evaluation; throws NumericalSingularity within 1e-9
    /// (relative) of a den zero.
    std::complex<double> operator()(std::complex<double> s) const;

    std::vector<std::complex<double>> poles() const { return roots(den_); }
    std::vector<std::complex<double>> zeros() const;

    /// Scales num and den so den is monic (for coefficient comparisons).
    TransferFunction normalized() const;

    TransferFunction operator*(const TransferFunction& other) const;
    TransferFunction operator*(double c) const;
    TransferFunction operator+(const TransferFunction& other) const;
    TransferFunction operator-() const { return *this * -1.0; }

    bool approx_equal(const TransferFunction& other, double tol) const;

private:
    Polynomial num_;
    Polynomial den_;
};

inline TransferFunction operator*(double c, const TransferFunction& g) { return g * c; }

/// First-order lag 1/(tau*s + 1).
TransferFunction first_order_lag(double tau);

/// Coprime reduction: cancels num/den root pairs closer than tol (relative
/// to the root magnitude) and rebuilds real-coefficient polynomials. Used
/// before pole counting; evaluation values are unchanged up to rounding.
TransferFunction minimal_form(const TransferFunction& g, double tol = 1e-6);

} // namespace mixedosc
