#pragma once

#include <span>
#include <vector>

#include "ptl/numerics.hpp"
#include "ptl/polymer.hpp"
#include "ptl/rational.hpp"

namespace ptl {

// Pfaffian by skew tridiagonalization with pivoting. Rejects odd order and
// asymmetry beyond 1e-14 relative to the largest entry.
double pfaffian(Matrix<double> a);

// Pf(S) with S_ij = (a_j - a_i)/(a_j + a_i), padded by a column of ones for odd n.
double schur_pfaffian(std::span<const double> alpha);
// prod_{i<j} (a_j - a_i)/(a_j + a_i)
double schur_pfaffian_product(std::span<const double> alpha);

// prod_{i<j}(a_i - a_j)(b_i - b_j) / prod_{i,j}(a_i + b_j)
double cauchy_determinant(std::span<const double> alpha, std::span<const double> beta);

// P(tau <= u) for exponential last passage percolation in the flat, half-flat
// or restricted geometry; closed-form determinant or Pfaffian entries.
double lpp_cdf(GeometryTag geometry, std::span<const double> alpha, std::span<const double> beta, double u);

// Same law by nested Gauss-Legendre over the ordered simplex of the
// continuum Schur integrand; n <= 3.
double lpp_cdf_schur_form(GeometryTag geometry, std::span<const double> alpha, std::span<const double> beta,
                          double u, int order = 24);

// Oracle for the de Bruijn step: integral of det(phi_j(x_i)) over
// 0 <= x_1 <= ... <= x_n <= u, phi_j(x) = a_j e^{-u a_j}(e^{a_j x} - e^{-a_j x}).
double restricted_det_simplex_oracle(std::span<const double> alpha, double u, int order = 24);
// The Pfaffian matrix Phi for the restricted law (order n, or n + 1 for odd n).
Matrix<double> restricted_phi_matrix(std::span<const double> alpha, double u);

// Point-to-line LPP with geometric weights of parameter y_i y_{N+1-j} on
// {i + j <= N + 1}: Schur-sum closed form, exact.
Rational baik_rains_cdf(std::span<const Rational> y, int u);
// Oracle: exact enumeration of weight configurations in {0..u}.
Rational geometric_lpp_exact_cdf(std::span<const Rational> y, int u, int N);

}  // namespace ptl
