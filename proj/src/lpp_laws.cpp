#include "ptl/lpp_laws.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include "ptl/exp_poly.hpp"
#include "ptl/schur.hpp"

namespace ptl {

double pfaffian(Matrix<double> a) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("pfaffian: matrix not square");
  if (n % 2) throw std::invalid_argument("pfaffian: odd order");
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::abs(a(i, j)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      if (std::abs(a(i, j) + a(j, i)) > 1e-14 * std::max(scale, 1.0)) {
        throw std::invalid_argument("pfaffian: matrix is not skew-symmetric");
      }
    }
  }
  double pf = 1.0;
  for (std::size_t k = 0; k + 1 < n; k += 2) {
    std::size_t piv = k + 1;
    for (std::size_t i = k + 2; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
    if (piv != k + 1) {
      a.swap_rows(k + 1, piv);
      a.swap_cols(k + 1, piv);
      pf = -pf;
    }
    if (a(k + 1, k) == 0.0) return 0.0;
    pf *= a(k, k + 1);
    if (k + 2 < n) {
      // eliminate row/column k beyond k+1 using the pivot a(k, k+1)
      std::vector<double> tau(n, 0.0), col(n, 0.0);
      for (std::size_t i = k + 2; i < n; ++i) {
        tau[i] = a(k, i) / a(k, k + 1);
        col[i] = a(i, k + 1);
      }
      for (std::size_t i = k + 2; i < n; ++i)
        for (std::size_t j = k + 2; j < n; ++j) a(i, j) += tau[i] * col[j] - col[i] * tau[j];
    }
  }
  return pf;
}

namespace {

void require_positive(std::span<const double> v, const char* what) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] > 0.0) || !std::isfinite(v[i])) {
      throw std::invalid_argument(std::string(what) + "_" + std::to_string(i + 1) + " must be positive");
    }
  }
}

Matrix<double> padded_skew(std::size_t n) { return Matrix<double>(n + n % 2, n + n % 2, 0.0); }

}  // namespace

double schur_pfaffian(std::span<const double> alpha) {
  const std::size_t n = alpha.size();
  Matrix<double> s = padded_skew(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double den = alpha[j] + alpha[i];
      if (den == 0.0) {
        throw std::invalid_argument("schur_pfaffian: alpha_" + std::to_string(i + 1) + " + alpha_" +
                                    std::to_string(j + 1) + " = 0");
      }
      s(i, j) = (alpha[j] - alpha[i]) / den;
      s(j, i) = -s(i, j);
    }
    if (n % 2) {
      s(i, n) = 1.0;
      s(n, i) = -1.0;
    }
  }
  return pfaffian(s);
}

double schur_pfaffian_product(std::span<const double> alpha) {
  double p = 1.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    for (std::size_t j = i + 1; j < alpha.size(); ++j) {
      double den = alpha[j] + alpha[i];
      if (den == 0.0) throw std::invalid_argument("schur_pfaffian_product: vanishing pair sum");
      p *= (alpha[j] - alpha[i]) / den;
    }
  }
  return p;
}

double cauchy_determinant(std::span<const double> alpha, std::span<const double> beta) {
  if (alpha.size() != beta.size()) throw std::invalid_argument("cauchy_determinant: dimension mismatch");
  double p = 1.0;
  const std::size_t n = alpha.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) p *= (alpha[i] - alpha[j]) * (beta[i] - beta[j]);
    for (std::size_t j = 0; j < n; ++j) p /= alpha[i] + beta[j];
  }
  return p;
}

// ---------------------------------------------------------------- exponential LPP

namespace {

// e^{-u(a+b)} int_0^u (e^{ax} - e^{-ax})(e^{bx} - e^{-bx}) dx
cplx flat_entry(cplx a, cplx b, double u) {
  cplx s = a + b;
  return scaled_exp_integral(a + b, s, u) - scaled_exp_integral(a - b, s, u) - scaled_exp_integral(b - a, s, u) +
         scaled_exp_integral(-a - b, s, u);
}

// e^{-u(a+b)} int_0^u (e^{ax} - e^{-ax}) e^{bx} dx
cplx half_flat_entry(cplx a, cplx b, double u) {
  cplx s = a + b;
  return scaled_exp_integral(a + b, s, u) - scaled_exp_integral(b - a, s, u);
}

// int_0^u phi_a with phi_a(x) = a e^{-ua}(e^{ax} - e^{-ax})
cplx phi_mass(cplx a, double u) {
  cplx e = std::exp(-a * u);
  return 1.0 + e * e - 2.0 * e;
}

// int int sign(y - x) phi_a(x) phi_b(y) over [0,u]^2 = 2 int phi_b I_a - I_a(u) I_b(u)
cplx phi_kernel(cplx a, cplx b, double u) {
  cplx s = a + b;
  cplx inner = scaled_exp_integral(b + a, s, u) + scaled_exp_integral(b - a, s, u) -
               2.0 * scaled_exp_integral(b, s, u) - scaled_exp_integral(a - b, s, u) -
               scaled_exp_integral(-a - b, s, u) + 2.0 * scaled_exp_integral(-b, s, u);
  return 2.0 * b * inner - phi_mass(a, u) * phi_mass(b, u);
}

std::vector<double> sorted_copy(std::span<const double> v) {
  std::vector<double> out(v.begin(), v.end());
  std::sort(out.begin(), out.end());
  return out;
}

double cross_product_sum(std::span<const double> a, std::span<const double> b) {
  double p = 1.0;
  for (double x : a)
    for (double y : b) p *= x + y;
  return p;
}

// prod(a_i + b_j) det(f(a_i, b_j)) / prod_{i<j}(a_i - a_j)(b_i - b_j)
double cauchy_binet_ratio(const std::function<cplx(cplx, cplx)>& f, std::span<const double> alpha,
                          std::span<const double> beta, double u) {
  const std::size_t n = alpha.size();
  if (min_gap(alpha) >= kConfluenceThreshold && min_gap(beta) >= kConfluenceThreshold) {
    Matrix<double> m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = f(alpha[i], beta[j]).real();
    return determinant(m) / cauchy_determinant(alpha, beta);
  }
  auto a = sorted_copy(alpha), b = sorted_copy(beta);
  const double radius = std::min(0.25, 1.0 / (1.0 + u));
  Matrix<cplx> d = divided_difference_matrix(f, a, b, radius, radius);
  Matrix<double> m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = d(i, j).real();
  return cross_product_sum(alpha, beta) * determinant(m);
}

double restricted_cdf(std::span<const double> alpha, double u) {
  const std::size_t n = alpha.size();
  if (min_gap(alpha) >= kConfluenceThreshold) {
    return pfaffian(restricted_phi_matrix(alpha, u)) / schur_pfaffian_product(alpha);
  }
  // Newton basis psi_j = phi[a_1..a_j]: Pf(Phi) = prod_{i<j}(a_j - a_i) Pf(Phi^psi)
  auto a = sorted_copy(alpha);
  const double radius = std::min(0.25, 1.0 / (1.0 + u));
  Matrix<cplx> k = divided_difference_matrix([u](cplx x, cplx y) { return phi_kernel(x, y, u); }, a, a, radius, radius);
  auto mass = prefix_divided_differences([u](cplx x) { return std::vector<cplx>{phi_mass(x, u)}; }, a, radius);
  Matrix<double> m = padded_skew(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      m(i, j) = k(i, j).real();
      m(j, i) = -m(i, j);
    }
    if (n % 2) {
      m(i, n) = mass[i][0].real();
      m(n, i) = -m(i, n);
    }
  }
  double pair_sums = 1.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) pair_sums *= a[i] + a[j];
  return pair_sums * pfaffian(m);
}

void validate_lpp(GeometryTag g, std::span<const double> alpha, std::span<const double> beta, double u) {
  if (!(u > 0.0) || !std::isfinite(u)) throw std::invalid_argument("lpp_cdf: u must be positive");
  if (alpha.empty()) throw std::invalid_argument("lpp_cdf: alpha must be nonempty");
  require_positive(alpha, "alpha");
  if (g == GeometryTag::flat || g == GeometryTag::half_flat) {
    if (beta.size() != alpha.size()) throw std::invalid_argument("lpp_cdf: alpha and beta lengths differ");
    require_positive(beta, "beta");
  } else if (g == GeometryTag::restricted) {
    if (!beta.empty()) throw std::invalid_argument("lpp_cdf: restricted geometry takes no beta");
  } else {
    throw std::invalid_argument("lpp_cdf: geometry must be flat, half_flat or restricted");
  }
}

}  // namespace

Matrix<double> restricted_phi_matrix(std::span<const double> alpha, double u) {
  const std::size_t n = alpha.size();
  Matrix<double> m = padded_skew(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      m(i, j) = phi_kernel(alpha[i], alpha[j], u).real();
      m(j, i) = -m(i, j);
    }
    if (n % 2) {
      m(i, n) = phi_mass(alpha[i], u).real();
      m(n, i) = -m(i, n);
    }
  }
  return m;
}

double lpp_cdf(GeometryTag geometry, std::span<const double> alpha, std::span<const double> beta, double u) {
  validate_lpp(geometry, alpha, beta, u);
  switch (geometry) {
    case GeometryTag::flat:
      return cauchy_binet_ratio([u](cplx a, cplx b) { return flat_entry(a, b, u); }, alpha, beta, u);
    case GeometryTag::half_flat:
      return cauchy_binet_ratio([u](cplx a, cplx b) { return half_flat_entry(a, b, u); }, alpha, beta, u);
    default:
      return restricted_cdf(alpha, u);
  }
}

namespace {

// Nested Gauss-Legendre over 0 <= x_n <= ... <= x_1 <= u.
double ordered_simplex(int n, double u, int order, const std::function<double(std::span<const double>)>& f) {
  const GaussRule& rule = gauss_legendre(order);
  std::vector<double> x(static_cast<std::size_t>(n));
  std::function<double(int, double)> nest = [&](int k, double upper) -> double {
    if (k == n) return f(x);
    double half = 0.5 * upper, sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      x[static_cast<std::size_t>(k)] = half * (1.0 + rule.nodes[i]);
      sum += rule.weights[i] * nest(k + 1, x[static_cast<std::size_t>(k)]);
    }
    return half * sum;
  };
  return nest(0, u);
}

}  // namespace

double lpp_cdf_schur_form(GeometryTag geometry, std::span<const double> alpha, std::span<const double> beta,
                          double u, int order) {
  validate_lpp(geometry, alpha, beta, u);
  const std::size_t n = alpha.size();
  if (n > 3) throw std::invalid_argument("lpp_cdf_schur_form: n <= 3 only");
  double log_h = 0.0, rate = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    rate += alpha[i];
    for (std::size_t j = i; j < n; ++j) log_h += std::log(alpha[i] + alpha[j]);
  }
  std::function<double(std::span<const double>)> integrand;
  switch (geometry) {
    case GeometryTag::flat:
      for (std::size_t i = 0; i < n; ++i) {
        rate += beta[i];
        for (std::size_t j = i; j < n; ++j) log_h += std::log(beta[i] + beta[j]);
      }
      log_h += std::log(cross_product_sum(alpha, beta));
      integrand = [&](std::span<const double> x) { return sp_cont(alpha, x) * sp_cont(beta, x); };
      break;
    case GeometryTag::half_flat:
      for (double b : beta) rate += b;
      log_h += std::log(cross_product_sum(alpha, beta));
      integrand = [&](std::span<const double> x) { return sp_cont(alpha, x) * s_cont(beta, x); };
      break;
    default:
      for (std::size_t i = 0; i < n; ++i) {
        log_h += std::log(alpha[i]);
        for (std::size_t j = i + 1; j < n; ++j) log_h += std::log(alpha[i] + alpha[j]);
      }
      integrand = [&](std::span<const double> x) { return sp_cont(alpha, x); };
      break;
  }
  return std::exp(log_h - rate * u) * ordered_simplex(static_cast<int>(n), u, order, integrand);
}

double restricted_det_simplex_oracle(std::span<const double> alpha, double u, int order) {
  require_positive(alpha, "alpha");
  const std::size_t n = alpha.size();
  if (n > 3) throw std::invalid_argument("restricted_det_simplex_oracle: n <= 3 only");
  // x_1 <= ... <= x_n: integrate the decreasing simplex with reversed rows
  return ordered_simplex(static_cast<int>(n), u, order, [&](std::span<const double> x) {
    Matrix<double> m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      double xi = x[n - 1 - i];
      for (std::size_t j = 0; j < n; ++j) {
        double a = alpha[j];
        m(i, j) = a * (std::exp(a * (xi - u)) - std::exp(-a * (xi + u)));
      }
    }
    return determinant(m);
  });
}

// ---------------------------------------------------------------- geometric LPP

Rational baik_rains_cdf(std::span<const Rational> y, int u) {
  const std::size_t n = y.size();
  if (n == 0) throw std::invalid_argument("baik_rains_cdf: y must be nonempty");
  if (u < 0) throw std::invalid_argument("baik_rains_cdf: u must be nonnegative");
  for (const Rational& v : y)
    if (!(v > 0 && v < 1)) throw std::invalid_argument("baik_rains_cdf: need 0 < y_i < 1");
  Rational pref = 1;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) pref *= 1 - y[i] * y[j];
  Rational sum = 0;
  std::vector<int> mu(n, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int bound) {
    if (i == n) {
      std::vector<int> doubled;
      for (int m : mu) doubled.push_back(2 * m);
      sum += schur_poly<Rational>(doubled, y, SchurRoute::jacobi_trudi);
      return;
    }
    for (int v = 0; v <= bound; ++v) {
      mu[i] = v;
      rec(i + 1, v);
    }
  };
  rec(0, u);
  return pref * sum;
}

Rational geometric_lpp_exact_cdf(std::span<const Rational> y, int u, int N) {
  if (N < 1 || static_cast<std::size_t>(N) != y.size()) {
    throw std::invalid_argument("geometric_lpp_exact_cdf: y must have length N");
  }
  if (u < 0) throw std::invalid_argument("geometric_lpp_exact_cdf: u must be nonnegative");
  for (const Rational& v : y)
    if (!(v > 0 && v < 1)) throw std::invalid_argument("geometric_lpp_exact_cdf: need 0 < y_i < 1");
  IndexSet shape = IndexSet::staircase(N);
  std::vector<Cell> cells = shape.cells();
  double configs = std::pow(static_cast<double>(u + 1), static_cast<double>(cells.size()));
  if (configs > 1e7) throw std::invalid_argument("geometric_lpp_exact_cdf: enumeration exceeds 1e7 configurations");
  // P(W = k) = (1 - q) q^k, q = y_i y_{N+1-j}
  std::vector<std::vector<Rational>> prob(cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c) {
    Rational q = y[static_cast<std::size_t>(cells[c].row - 1)] * y[static_cast<std::size_t>(N - cells[c].col)];
    Rational p = 1 - q;
    for (int k = 0; k <= u; ++k) {
      prob[c].push_back(p);
      p *= q;
    }
  }
  std::vector<int> w(cells.size(), 0);
  Rational total = 0;
  std::function<void(std::size_t, const Rational&)> rec = [&](std::size_t c, const Rational& weight) {
    if (c == cells.size()) {
      // last passage time over the staircase
      std::vector<int> g(cells.size(), 0);
      int best = 0;
      for (std::size_t k = 0; k < cells.size(); ++k) {
        int i = cells[k].row, j = cells[k].col, prev = 0;
        if (i > 1) prev = std::max(prev, g[shape.offset(i - 1, j)]);
        if (j > 1) prev = std::max(prev, g[shape.offset(i, j - 1)]);
        g[k] = prev + w[k];
        if (i + j == N + 1) best = std::max(best, g[k]);
      }
      if (best <= u) total += weight;
      return;
    }
    for (int k = 0; k <= u; ++k) {
      w[c] = k;
      rec(c + 1, weight * prob[c][static_cast<std::size_t>(k)]);
    }
  };
  rec(0, Rational(1));
  return total;
}

}  // namespace ptl
