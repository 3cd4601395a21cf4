#pragma once

#include <span>
#include <vector>

#include "ptl/lattice.hpp"
#include "ptl/polymer.hpp"
#include "ptl/specfun.hpp"

namespace ptl {

struct LaplaceQuery {
  Geometry geometry;
  PolymerParams params;
  double r = 1.0;

  void validate() const;
};

// E[exp(-r Z)] through the Whittaker-integral formulas: so x so (flat),
// so x gl (half-flat, beta shifted by gamma) or a single so (restricted and
// symmetric). n <= 2.
double laplace_whittaker(const LaplaceQuery& query, const QuadratureSpec& quad = {});

struct IdentityCheck {
  cplx lhs;
  cplx rhs;
  double abs_diff = 0.0;
  double rel_diff() const { return abs_diff / std::abs(rhs); }
};

// int e^{-r x_1} Psi^gl_alpha Psi^gl_beta dx/x  vs  r^{-sum(alpha+beta)} prod Gamma(alpha_i+beta_j)
IdentityCheck bump_stade_check(std::span<const cplx> alpha, std::span<const cplx> beta, double r,
                               const QuadratureSpec& quad = {});
// int Psi^gl_{-alpha} Psi^so_beta dx/x  vs  prod Gamma(alpha_i +- beta_j) / prod_{i<j} Gamma(alpha_i+alpha_j)
IdentityCheck ishii_stade_check(std::span<const cplx> alpha, std::span<const cplx> beta,
                                const QuadratureSpec& quad = {});

// r^{-sum(lambda+alpha)} prod_{i,j} Gamma(lambda_i + alpha_j); needs Re alpha_j > 0
cplx hat_f(std::span<const cplx> lambda, double r, std::span<const cplx> alpha);
// prod Gamma(s - lambda_i +- beta_j) / prod_{i<j} Gamma(2s - lambda_i - lambda_j); needs Re s > |Re beta_j|
cplx hat_g(std::span<const cplx> lambda, cplx s, std::span<const cplx> beta);

struct ContourSpec {
  double delta = 0.0;      // lambda line Re = delta; 0 picks max alpha + 0.5
  double epsilon = 0.0;    // rho line (flat); 0 picks max beta + 0.5
  double truncation = 0.0; // |Im| cut; 0 picks it from the decay of the integrand
  double step = 0.25;      // initial step, halved until the value settles
  double tol = 1e-9;
  int max_halvings = 4;
};

struct ContourResult {
  double value = 0.0;
  double imag_residual = 0.0;
  double step = 0.0;
  double truncation = 0.0;
  double change = 0.0;  // |difference| between the last two step sizes
};

// Contour-integral route: double contour for flat, single for half-flat; n <= 2.
ContourResult laplace_contour(const LaplaceQuery& query, const ContourSpec& spec = {});

}  // namespace ptl
