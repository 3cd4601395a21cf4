#pragma once

#include <span>
#include <vector>

#include "ptl/rational.hpp"

namespace ptl {

// Weakly decreasing nonnegative parts; shorter than the variable count means
// trailing zeros.
using Partition = std::vector<int>;

void validate_partition(std::span<const int> mu);

enum class SchurRoute { bialternant, jacobi_trudi };

// Classical Schur polynomial. The bialternant route falls back to
// Jacobi-Trudi when two variables coincide.
template <class T>
T schur_poly(std::span<const int> mu, std::span<const T> y, SchurRoute route = SchurRoute::bialternant);
// Oracle: sum over semistandard tableaux.
template <class T>
T schur_poly_tableaux(std::span<const int> mu, std::span<const T> y);

enum class SpRoute { weyl, gt };

// Symplectic Schur polynomial sp_mu(y_1..y_n), y_j != 0.
template <class T>
T sp_poly(std::span<const int> mu, std::span<const T> y, SpRoute route = SpRoute::weyl);

// Continuum symplectic Schur function at 0 <= x_n <= ... <= x_1.
double sp_cont(std::span<const double> alpha, std::span<const double> x);
// Continuum classical Schur function at x_n <= ... <= x_1.
double s_cont(std::span<const double> beta, std::span<const double> x);

// Oracles: nested Gauss-Legendre over the continuous Gelfand-Tsetlin polytope.
double sp_cont_polytope_oracle(std::span<const double> alpha, std::span<const double> x, int order = 20);
double s_cont_polytope_oracle(std::span<const double> beta, std::span<const double> x, int order = 20);

}  // namespace ptl
