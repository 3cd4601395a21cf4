#pragma once

#include <complex>
#include <span>

namespace ptl {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;

// Analytic continuation of log Gamma with its cut on the negative real axis.
// Throws std::domain_error at non-positive integers.
cplx log_gamma(cplx z);
cplx gamma(cplx z);

// 1/(Gamma(z) Gamma(-z)) = -z sin(pi z)/pi, finite everywhere.
cplx reciprocal_gamma_pair(cplx z);

// Macdonald function K_nu(x) for real order.
double bessel_k(double nu, double x);

// Trapezoid rule on K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt.
double bessel_k_quadrature(double nu, double x);

// (2 pi i)^{-n} (n!)^{-1} prod_{i != j} Gamma(l_i - l_j)^{-1}
cplx sklyanin_density(std::span<const cplx> lambda);

}  // namespace ptl
