#pragma once

#include <functional>
#include <span>
#include <vector>

#include "ptl/numerics.hpp"
#include "ptl/specfun.hpp"

namespace ptl {

// Parameter spacing below which determinant ratios switch from the plain
// quotient to divided differences.
inline constexpr double kConfluenceThreshold = 1e-6;

// e^{-s u} * int_0^u e^{c x} dx, stable as c -> 0 and for large u.
cplx scaled_exp_integral(cplx c, cplx s, double u);
double scaled_exp_integral(double c, double s, double u);

// Smallest |x_i - x_j| over i != j (infinity for fewer than two entries).
double min_gap(std::span<const double> x);

using VectorFn = std::function<std::vector<cplx>(cplx)>;

// Prefix divided differences f[x_1..x_k], k = 1..n, of an entire
// vector-valued f at ascending real nodes. Node clusters narrower than
// `radius` are resolved by a Cauchy integral on a circle of radius
// spread + radius, so repeated nodes give derivatives.
std::vector<std::vector<cplx>> prefix_divided_differences(const VectorFn& f, std::span<const double> nodes,
                                                          double radius);

// D(i, j) = f[a_1..a_{i+1} ; b_1..b_{j+1}] for entire f(a, b) and ascending nodes.
Matrix<cplx> divided_difference_matrix(const std::function<cplx(cplx, cplx)>& f, std::span<const double> a,
                                       std::span<const double> b, double radius_a, double radius_b);

}  // namespace ptl
