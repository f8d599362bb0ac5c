#include "mixedosc/polynomial.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "mixedosc/errors.hpp"
#include "mixedosc/linalg.hpp"

namespace mixedosc {

void Polynomial::trim() {
    while (coeffs_.size() > 1 && coeffs_.back() == 0.0) coeffs_.pop_back();
    if (coeffs_.empty()) coeffs_.push_back(0.0);
}

double Polynomial::operator()(double x) const {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

std::complex<double> Polynomial::operator()(std::complex<double> s) const {
    std::complex<double> acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * s + *it;
    return acc;
}

Polynomial Polynomial::derivative() const {
    if (degree() < 1) return Polynomial::zero();
    std::vector<double> d(coeffs_.size() - 1);
    for (std::size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = coeffs_[i] * static_cast<double>(i);
    return Polynomial(std::move(d));
}

Polynomial Polynomial::operator+(const Polynomial& other) const {
    std::vector<double> out(std::max(coeffs_.size(), other.coeffs_.size()), 0.0);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) out[i] += coeffs_[i];
    for (std::size_t i = 0; i < other.coeffs_.size(); ++i) out[i] += other.coeffs_[i];
    return Polynomial(std::move(out));
}

Polynomial Polynomial::operator-(const Polynomial& other) const {
    return *this + (other * -1.0);
}

Polynomial Polynomial::operator*(const Polynomial& other) const {
    if (is_zero() || other.is_zero()) return Polynomial::zero();
    std::vector<double> out(coeffs_.size() + other.coeffs_.size() - 1, 0.0);
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        for (std::size_t j = 0; j < other.coeffs_.size(); ++j)
            out[i + j] += coeffs_[i] * other.coeffs_[j];
    return Polynomial(std::move(out));
}

Polynomial Polynomial::operator*(double c) const {
    std::vector<double> out(coeffs_);
    for (double& v : out) v *= c;
    return Polynomial(std::move(out));
}

Polynomial Polynomial::monic() const {
    if (is_zero()) throw InvalidInput("monic(): zero polynomial");
    return *this * (1.0 / leading());
}

double Polynomial::max_abs_coeff() const {
    double m = 0.0;
    for (double c : coeffs_) m = std::max(m, std::abs(c));
    return m;
}

bool Polynomial::approx_equal(const Polynomial& other, double tol) const {
    const double scale = std::max({1.0, max_abs_coeff(), other.max_abs_coeff()});
    const std::size_t n = std::max(coeffs_.size(), other.coeffs_.size());
    for (std::size_t i = 0; i < n; ++i) {
        const double a = i < coeffs_.size() ? coeffs_[i] : 0.0;
        const double b = i < other.coeffs_.size() ? other.coeffs_[i] : 0.0;
        if (std::abs(a - b) > tol * scale) return false;
    }
    return true;
}

std::vector<std::complex<double>> roots(const Polynomial& p) {
    if (p.is_zero()) throw InvalidInput("roots(): zero polynomial");
    if (p.degree() < 1) throw InvalidInput("roots(): degree must be >= 1");

    const Polynomial m = p.monic();
    const int n = m.degree();
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) companion(i, n - 1) = -m.coeffs()[i];
    return eigenvalues(companion);
}

} // namespace mixedosc
