#include "ptl/laws.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ptl/whittaker.hpp"

namespace ptl {

namespace {

std::vector<cplx> to_complex(std::span<const double> v) { return {v.begin(), v.end()}; }

std::vector<double> shifted(std::span<const double> v, double c) {
  std::vector<double> out(v.begin(), v.end());
  for (double& x : out) x += c;
  return out;
}

double sum_of(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

double log_gamma_real(double x) { return log_gamma(cplx(x, 0.0)).real(); }

// log of the normalization constants
double log_norm_flat(std::span<const double> a, std::span<const double> b, double g) {
  double s = 0.0;
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) s += log_gamma_real(a[i] + b[j] + g);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) s += log_gamma_real(a[i] + a[j]) + log_gamma_real(b[i] + b[j]);
  return s;
}

double log_norm_half_flat(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) s += log_gamma_real(a[i] + b[j]);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) s += log_gamma_real(a[i] + a[j]);
  return s;
}

double log_norm_restricted(std::span<const double> a, double g) {
  double s = 0.0;
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) s += log_gamma_real(a[i] + g);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) s += log_gamma_real(a[i] + a[j] + 2.0 * g);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) s += log_gamma_real(a[i] + a[j]);
  return s;
}

// Outer lattice sum over R_+^n in log-coordinates, n = 1 or 2.
cplx outer_sum(int n, const std::function<cplx(std::span<const int>)>& f, LatticeWindow start,
               const QuadratureSpec& q) {
  if (n == 1) {
    return adaptive_sum_1d([&](int k) { return f(std::span<const int>(&k, 1)); }, start, q).value;
  }
  if (n == 2) {
    return adaptive_sum_2d(
               [&](int a, int b) {
                 int k[2] = {a, b};
                 return f(k);
               },
               start, start, q)
        .value;
  }
  throw std::invalid_argument("outer integral supported for n <= 2");
}

bool is_integrable_geometry(GeometryTag tag) { return tag != GeometryTag::point_to_point; }

}  // namespace

void LaplaceQuery::validate() const {
  if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("LaplaceQuery: r must be positive");
  if (!is_integrable_geometry(geometry.tag())) {
    throw std::invalid_argument("LaplaceQuery: point-to-point geometry has no Laplace formula here");
  }
  if (params.kind != WeightKind::inverse_gamma) {
    throw std::invalid_argument("LaplaceQuery: Laplace formulas need inverse-gamma weights");
  }
  params.validate(geometry);
}

double laplace_whittaker(const LaplaceQuery& query, const QuadratureSpec& quad) {
  query.validate();
  const Geometry& g = query.geometry;
  const int n = g.n();
  if (n > quad.so_cap || n > 2) {
    throw std::invalid_argument("laplace_whittaker: n = " + std::to_string(n) + " exceeds the supported dimension");
  }
  const auto& p = query.params;
  const double r = query.r, lr = std::log(r), h = quad.step();
  SoWhittaker so_a(to_complex(p.alpha), quad);
  std::function<cplx(std::span<const int>)> integrand;
  double log_pref = 0.0;
  std::unique_ptr<SoWhittaker> so_b;
  std::unique_ptr<GlWhittaker> gl_b;
  auto common = [&](std::span<const int> k, double gamma) {
    double t1 = k[0] * h, tsum = 0.0;
    for (int v : k) tsum += v * h;
    double e = gamma * tsum - r * std::exp(t1);
    return e < -745.0 ? 0.0 : std::exp(e);
  };
  switch (g.tag()) {
    case GeometryTag::flat: {
      so_b = std::make_unique<SoWhittaker>(to_complex(p.beta), quad);
      log_pref = lr * (sum_of(p.alpha) + sum_of(p.beta) + n * p.gamma) - log_norm_flat(p.alpha, p.beta, p.gamma);
      integrand = [&](std::span<const int> k) {
        double c = common(k, p.gamma);
        return c == 0.0 ? cplx(0.0) : c * so_a.at_lattice(k) * so_b->at_lattice(k);
      };
      break;
    }
    case GeometryTag::half_flat: {
      std::vector<double> b = shifted(p.beta, p.gamma);
      gl_b = std::make_unique<GlWhittaker>(to_complex(b), quad);
      log_pref = lr * (sum_of(p.alpha) + sum_of(b)) - log_norm_half_flat(p.alpha, b);
      integrand = [&](std::span<const int> k) {
        double c = common(k, 0.0);
        return c == 0.0 ? cplx(0.0) : c * so_a.at_lattice(k) * gl_b->at_lattice(k);
      };
      break;
    }
    default: {
      log_pref = lr * (sum_of(p.alpha) + n * p.gamma) - log_norm_restricted(p.alpha, p.gamma);
      integrand = [&](std::span<const int> k) {
        double c = common(k, p.gamma);
        return c == 0.0 ? cplx(0.0) : c * so_a.at_lattice(k);
      };
      break;
    }
  }
  LatticeWindow start = window_covering(-2.0, std::max(0.0, -lr), 2.0, h);
  cplx integral = outer_sum(n, integrand, start, quad);
  return (std::exp(log_pref) * integral).real();
}

IdentityCheck bump_stade_check(std::span<const cplx> alpha, std::span<const cplx> beta, double r,
                               const QuadratureSpec& quad) {
  const std::size_t n = alpha.size();
  if (beta.size() != n || n == 0) throw std::invalid_argument("bump_stade_check: dimension mismatch");
  if (!(r > 0.0)) throw std::invalid_argument("bump_stade_check: r must be positive");
  if (static_cast<int>(n) > quad.gl_cap) throw std::invalid_argument("bump_stade_check: n exceeds gl cap");
  cplx total = 0.0, log_rhs = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (!((alpha[i] + beta[j]).real() > 0.0)) {
        throw std::invalid_argument("bump_stade_check: Re(alpha_" + std::to_string(i + 1) + " + beta_" +
                                    std::to_string(j + 1) + ") must be positive");
      }
      log_rhs += log_gamma(alpha[i] + beta[j]);
    }
    total += alpha[i] + beta[i];
  }
  const double h = quad.step(), lr = std::log(r);
  log_rhs -= total * lr;
  // homogeneity splits x = e^{t}(1, e^{d_2}, ...): a Gamma-type integral in t
  // times an integral over the reduced coordinates d
  auto radial = adaptive_sum_1d(
      [&](int k) {
        double t = k * h, e = -r * std::exp(t);
        return e < -745.0 ? cplx(0.0) : std::exp(total * t + e);
      },
      window_covering(-2.0, std::max(0.0, -lr), 2.0, h), quad);
  GlWhittaker psi_a(std::vector<cplx>(alpha.begin(), alpha.end()), quad);
  GlWhittaker psi_b(std::vector<cplx>(beta.begin(), beta.end()), quad);
  cplx reduced = 1.0;
  LatticeWindow start = window_covering(-2.0, 2.0, 0.0, h);
  if (n == 2) {
    reduced = adaptive_sum_1d(
                  [&](int d) {
                    int k[2] = {0, d};
                    return psi_a.at_lattice(k) * psi_b.at_lattice(k);
                  },
                  start, quad)
                  .value;
  } else if (n == 3) {
    reduced = adaptive_sum_2d(
                  [&](int d2, int d3) {
                    int k[3] = {0, d2, d3};
                    return psi_a.at_lattice(k) * psi_b.at_lattice(k);
                  },
                  start, start, quad)
                  .value;
  } else if (n > 3) {
    throw std::invalid_argument("bump_stade_check: n > 3 not supported");
  }
  cplx lhs = radial.value * reduced, rhs = std::exp(log_rhs);
  return {lhs, rhs, std::abs(lhs - rhs)};
}

IdentityCheck ishii_stade_check(std::span<const cplx> alpha, std::span<const cplx> beta,
                                const QuadratureSpec& quad) {
  const std::size_t n = alpha.size();
  if (beta.size() != n || n == 0) throw std::invalid_argument("ishii_stade_check: dimension mismatch");
  cplx log_rhs = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (!(alpha[i].real() > std::abs(beta[j].real()))) {
        throw std::invalid_argument("ishii_stade_check: need Re(alpha_" + std::to_string(i + 1) + ") > |Re(beta_" +
                                    std::to_string(j + 1) + ")|");
      }
      log_rhs += log_gamma(alpha[i] + beta[j]) + log_gamma(alpha[i] - beta[j]);
    }
    for (std::size_t j = i + 1; j < n; ++j) log_rhs -= log_gamma(alpha[i] + alpha[j]);
  }
  std::vector<cplx> neg(n);
  for (std::size_t i = 0; i < n; ++i) neg[i] = -alpha[i];
  // the integrand decays only like x^{-min(alpha - |beta|)}; a looser tail keeps
  // the outer window finite without affecting the checked tolerance
  QuadratureSpec outer = quad;
  outer.tail = std::max(quad.tail, 1e-10);
  GlWhittaker gl(neg, quad);
  SoWhittaker so(std::vector<cplx>(beta.begin(), beta.end()), quad);
  cplx lhs = outer_sum(
      static_cast<int>(n), [&](std::span<const int> k) { return gl.at_lattice(k) * so.at_lattice(k); },
      window_covering(-1.0, 3.0, 0.0, quad.step()), outer);
  cplx rhs = std::exp(log_rhs);
  return {lhs, rhs, std::abs(lhs - rhs)};
}

cplx hat_f(std::span<const cplx> lambda, double r, std::span<const cplx> alpha) {
  if (lambda.size() != alpha.size()) throw std::invalid_argument("hat_f: dimension mismatch");
  if (!(r > 0.0)) throw std::invalid_argument("hat_f: r must be positive");
  cplx e = 0.0;
  for (std::size_t j = 0; j < alpha.size(); ++j) {
    if (!(alpha[j].real() > 0.0)) {
      throw std::invalid_argument("hat_f: Re(alpha_" + std::to_string(j + 1) + ") must be positive");
    }
  }
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    e -= (lambda[i] + alpha[i]) * std::log(r);
    for (cplx a : alpha) e += log_gamma(lambda[i] + a);
  }
  return std::exp(e);
}

cplx hat_g(std::span<const cplx> lambda, cplx s, std::span<const cplx> beta) {
  if (lambda.size() != beta.size()) throw std::invalid_argument("hat_g: dimension mismatch");
  for (std::size_t j = 0; j < beta.size(); ++j) {
    if (!(s.real() > std::abs(beta[j].real()))) {
      throw std::invalid_argument("hat_g: need Re(s) > |Re(beta_" + std::to_string(j + 1) + ")|");
    }
  }
  cplx e = 0.0;
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    for (cplx b : beta) e += log_gamma(s - lambda[i] + b) + log_gamma(s - lambda[i] - b);
    for (std::size_t j = i + 1; j < lambda.size(); ++j) e -= log_gamma(2.0 * s - lambda[i] - lambda[j]);
  }
  return std::exp(e);
}

// ---------------------------------------------------------------- contour route

namespace {

// Lattice tables for the contour integrand. Variables 0..nl-1 sit on
// delta + i k h, variables nl..nl+nr-1 on epsilon + i k h, k in [-K, K].
struct ContourIntegrand {
  int nl = 0, nr = 0, big_k = 0;
  std::vector<cplx> single_l, single_r;  // index k + K
  std::vector<cplx> pair_diff;           // 1/(Gamma(d)Gamma(-d)), d = i (k - k') h, index + 2K
  std::vector<cplx> sum_ll, sum_rr;      // 1/Gamma(2 delta + i s h), index s + 2K
  std::vector<cplx> sum_lr;              // Gamma(delta + epsilon + gamma + i s h)
  double scale = 1.0;                    // (2 pi)^{-dims} / (n!)^{...}

  cplx term(const std::vector<int>& k) const {
    const int K = big_k;
    cplx v = scale;
    for (int i = 0; i < nl; ++i) {
      v *= single_l[static_cast<std::size_t>(k[i] + K)];
      for (int j = i + 1; j < nl; ++j) {
        v *= pair_diff[static_cast<std::size_t>(k[i] - k[j] + 2 * K)] * sum_ll[static_cast<std::size_t>(k[i] + k[j] + 2 * K)];
      }
      for (int j = 0; j < nr; ++j) v *= sum_lr[static_cast<std::size_t>(k[i] + k[nl + j] + 2 * K)];
    }
    for (int i = 0; i < nr; ++i) {
      v *= single_r[static_cast<std::size_t>(k[nl + i] + K)];
      for (int j = i + 1; j < nr; ++j) {
        v *= pair_diff[static_cast<std::size_t>(k[nl + i] - k[nl + j] + 2 * K)] *
             sum_rr[static_cast<std::size_t>(k[nl + i] + k[nl + j] + 2 * K)];
      }
    }
    return v;
  }
};

struct ContourProblem {
  int nl, nr;
  double delta, epsilon, gamma, log_r;
  std::vector<cplx> single_l_shifts, single_r_shifts;  // Gamma(lambda + c) factors
  double log_pref;
};

ContourIntegrand build(const ContourProblem& pr, double h, int big_k) {
  ContourIntegrand f;
  f.nl = pr.nl;
  f.nr = pr.nr;
  f.big_k = big_k;
  auto single = [&](double base, const std::vector<cplx>& shifts) {
    std::vector<cplx> out;
    for (int k = -big_k; k <= big_k; ++k) {
      cplx lam(base, k * h);
      cplx e = -lam * pr.log_r;
      for (cplx c : shifts) e += log_gamma(lam + c);
      out.push_back(std::exp(e));
    }
    return out;
  };
  f.single_l = single(pr.delta, pr.single_l_shifts);
  if (pr.nr > 0) f.single_r = single(pr.epsilon, pr.single_r_shifts);
  for (int d = -2 * big_k; d <= 2 * big_k; ++d) {
    f.pair_diff.push_back(reciprocal_gamma_pair(cplx(0.0, d * h)));
    f.sum_ll.push_back(std::exp(-log_gamma(cplx(2.0 * pr.delta, d * h))));
    if (pr.nr > 0) {
      f.sum_rr.push_back(std::exp(-log_gamma(cplx(2.0 * pr.epsilon, d * h))));
      f.sum_lr.push_back(std::exp(log_gamma(cplx(pr.delta + pr.epsilon + pr.gamma, d * h))));
    }
  }
  auto fact = [](int m) {
    double v = 1.0;
    for (int i = 2; i <= m; ++i) v *= i;
    return v;
  };
  f.scale = std::pow(2.0 * kPi, -(pr.nl + pr.nr)) / (fact(pr.nl) * fact(pr.nr));
  return f;
}

struct LatticeTotal {
  cplx sum;
  double boundary_ratio;
};

LatticeTotal lattice_total(const ContourIntegrand& f, double h) {
  const int dims = f.nl + f.nr, K = f.big_k;
  std::vector<int> k(static_cast<std::size_t>(dims), -K);
  cplx sum = 0.0;
  double peak = 0.0, boundary = 0.0;
  for (;;) {
    cplx v = f.term(k);
    sum += v;
    double a = std::abs(v);
    peak = std::max(peak, a);
    for (int x : k) {
      if (x == -K || x == K) {
        boundary = std::max(boundary, a);
        break;
      }
    }
    int d = 0;
    while (d < dims && k[static_cast<std::size_t>(d)] == K) k[static_cast<std::size_t>(d++)] = -K;
    if (d == dims) break;
    ++k[static_cast<std::size_t>(d)];
  }
  return {sum * std::pow(h, dims), peak > 0.0 ? boundary / peak : 0.0};
}

}  // namespace

ContourResult laplace_contour(const LaplaceQuery& query, const ContourSpec& spec) {
  query.validate();
  const Geometry& g = query.geometry;
  const int n = g.n();
  if (n > 2) throw std::invalid_argument("laplace_contour: n <= 2 only");
  const auto& p = query.params;
  ContourProblem pr{};
  pr.nl = n;
  pr.log_r = std::log(query.r);
  pr.gamma = p.gamma;
  const double amax = *std::max_element(p.alpha.begin(), p.alpha.end());
  pr.delta = spec.delta > 0.0 ? spec.delta : amax + 0.5;
  if (!(pr.delta > amax)) throw std::invalid_argument("laplace_contour: delta must exceed every alpha_j");
  for (double a : p.alpha) {
    pr.single_l_shifts.emplace_back(a);
    pr.single_l_shifts.emplace_back(-a);
  }
  if (g.tag() == GeometryTag::half_flat) {
    std::vector<double> b = shifted(p.beta, p.gamma);
    for (double v : b) pr.single_l_shifts.emplace_back(v);
    // r^{sum(alpha+beta)} r^{-sum beta} / G
    pr.log_pref = pr.log_r * sum_of(p.alpha) - log_norm_half_flat(p.alpha, b);
  } else if (g.tag() == GeometryTag::flat) {
    pr.nr = n;
    const double bmax = *std::max_element(p.beta.begin(), p.beta.end());
    pr.epsilon = spec.epsilon > 0.0 ? spec.epsilon : bmax + 0.5;
    if (!(pr.epsilon > bmax)) throw std::invalid_argument("laplace_contour: epsilon must exceed every beta_j");
    for (double v : p.beta) {
      pr.single_r_shifts.emplace_back(v);
      pr.single_r_shifts.emplace_back(-v);
    }
    // r^{sum(alpha+beta+gamma)} r^{-n gamma} / G
    pr.log_pref = pr.log_r * (sum_of(p.alpha) + sum_of(p.beta)) - log_norm_flat(p.alpha, p.beta, p.gamma);
  } else {
    throw std::invalid_argument("laplace_contour: only flat and half-flat geometries");
  }

  const bool fixed_cut = spec.truncation > 0.0;
  double cut = fixed_cut ? spec.truncation : 6.0;
  auto evaluate = [&](double h) {
    for (;;) {
      int big_k = static_cast<int>(std::ceil(cut / h));
      LatticeTotal t = lattice_total(build(pr, h, big_k), h);
      if (t.boundary_ratio <= 1e-12) return t.sum;
      if (fixed_cut || cut > 60.0) {
        throw std::runtime_error("laplace_contour: truncation too small (boundary/peak = " +
                                 std::to_string(t.boundary_ratio) + ")");
      }
      cut += 2.0;
    }
  };
  double h = spec.step;
  cplx prev = evaluate(h), cur = prev;
  double change = std::numeric_limits<double>::infinity();
  for (int i = 0; i < spec.max_halvings; ++i) {
    double points = std::pow(2.0 * cut / (h / 2.0), pr.nl + pr.nr);
    if (points > 6e7) break;  // stop refining a 4-D lattice before it gets out of hand
    h /= 2.0;
    cur = evaluate(h);
    change = std::abs(cur - prev) * std::exp(pr.log_pref);
    prev = cur;
    if (change < spec.tol) break;
  }
  cplx value = std::exp(pr.log_pref) * cur;
  if (std::abs(value.imag()) > 1e-8) {
    throw std::runtime_error("laplace_contour: imaginary residual " + std::to_string(value.imag()));
  }
  return {value.real(), std::abs(value.imag()), h, cut, change};
}

}  // namespace ptl
