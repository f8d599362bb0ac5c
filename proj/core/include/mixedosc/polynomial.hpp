#pragma once

#include <complex>
#include <initializer_list>
#include <vector>

namespace mixedosc {

/// Real polynomial stored as coefficients in ascending degree order.
/// The representation is kept trimmed: the highest stored coefficient is
/// nonzero, except for the zero polynomial which is stored as {0}.
class Polynomial {
public:
    Polynomial() : coeffs_{0.0} {}
    Polynomial(std::initializer_list<double> ascending) : coeffs_(ascending) { trim(); }
    explicit Polynomial(std::vector<double> ascending) : coeffs_(std::move(ascending)) { trim(); }

    static Polynomial zero() { return Polynomial(); }
    static Polynomial constant(double c) { return Polynomial({c}); }

    const std::vector<double>& coeffs() const noexcept { return coeffs_; }
    int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const noexcept { return coeffs_.size() == 1 && coeffs_[0] == 0.0; }
    double leading() const noexcept { return coeffs_.back(); }

    double operator()(double x) const;
    std::complex<double> operator()(std::complex<double> s) const;

    Polynomial derivative() const;

    Polynomial operator+(const Polynomial& other) const;
    Polynomial operator-(const Polynomial& other) const;
    Polynomial operator*(const Polynomial& other) const;
    Polynomial operator*(double c) const;
    Polynomial operator-() const { return *this * -1.0; }

    /// Scales so the leading coefficient is 1. Invalid on the zero polynomial.
    Polynomial monic() const;

    double max_abs_coeff() const;

    bool approx_equal(const Polynomial& other, double tol) const;

private:
    void trim();

    std::vector<double> coeffs_;
};

inline Polynomial operator*(double c, const Polynomial& p) { return p * c; }

/// All complex roots of p (degree >= 1 required), computed from the
/// companion matrix of the monic normalization. Conjugate-symmetric for
/// real input by construction.
std::vector<std::complex<double>> roots(const Polynomial& p);

} // namespace mixedosc
