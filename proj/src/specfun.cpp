#include "ptl/specfun.hpp"

#include <array>
#include <cmath>
#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

namespace ptl {

namespace {

// Lanczos coefficients, g = 607/128, 14 terms (Godfrey).  Relative error of
// the resulting log Gamma is below 1e-15 on Re z >= 0.5.
constexpr double kLanczosG = 4.7421875;
constexpr double kLanczosC0 = 0.999999999999997092;
constexpr std::array<double, 14> kLanczos = {
    57.1562356658629235,     -59.5979603554754912,    14.1360979747417471,
    -0.491913816097620199,   .339946499848118887e-4,  .465236289270485756e-4,
    -.983744753048795646e-4, .158088703224912494e-3,  -.210264441724104883e-3,
    .217439618115212643e-3,  -.164318106536763890e-3, .844182239838527433e-4,
    -.261908384015814087e-4, .368991826595316234e-5};
constexpr double kSqrt2Pi = 2.5066282746310005024;

cplx lanczos_log_gamma(cplx z) {
  cplx t = z + (kLanczosG + 0.5);
  cplx ser = kLanczosC0;
  cplx y = z;
  for (double c : kLanczos) {
    y += 1.0;
    ser += c / y;
  }
  return (z + 0.5) * std::log(t) - t + std::log(kSqrt2Pi * ser / z);
}

// Taylor coefficients of 1/Gamma(1+z) at 0.
constexpr std::array<double, 30> kRecipGamma1 = {
    1.0,
    0.5772156649015328606065,
    -0.655878071520253881077,
    -0.042002635034095235529,
    0.1665386113822914895017,
    -0.04219773455554433674821,
    -0.009621971527876973562115,
    0.007218943246663099542395,
    -0.001165167591859065112114,
    -0.0002152416741149509728157,
    0.0001280502823881161861532,
    -0.00002013485478078823865569,
    -0.000001250493482142670657345,
    0.000001133027231981695882374,
    -2.05633841697760710345e-7,
    6.116095104481415817862e-9,
    5.002007644469222930056e-9,
    -1.181274570487020144588e-9,
    1.043426711691100510492e-10,
    7.78226343990507125405e-12,
    -3.696805618642205708188e-12,
    5.100370287454475979015e-13,
    -2.058326053566506783222e-14,
    -5.34812253942301798237e-15,
    1.226778628238260790159e-15,
    -1.181259301697458769514e-16,
    1.18669225475160033258e-18,
    1.412380655318031781556e-18,
    -2.298745684435370206592e-19,
    1.714406321927337433384e-20};

struct TemmeGammas {
  double gam1;    // (1/G(1-mu) - 1/G(1+mu)) / (2 mu)
  double gam2;    // (1/G(1-mu) + 1/G(1+mu)) / 2
  double gampl;   // 1/G(1+mu)
  double gammi;   // 1/G(1-mu)
};

TemmeGammas temme_gammas(double mu) {
  double even = 0.0, odd = 0.0, p = 1.0;
  for (std::size_t k = 0; k < kRecipGamma1.size(); ++k) {
    if (k % 2 == 0) {
      even += kRecipGamma1[k] * p;
    } else {
      odd += kRecipGamma1[k] * p;
    }
    p *= mu;
  }
  // odd collects c_k mu^k for odd k; gam1 needs -sum c_k mu^{k-1}
  double odd_over_mu = 0.0;
  double q = 1.0;
  for (std::size_t k = 1; k < kRecipGamma1.size(); k += 2) {
    odd_over_mu += kRecipGamma1[k] * q;
    q *= mu * mu;
  }
  return {-odd_over_mu, even, even + odd, even - odd};
}

// K_mu and K_{mu+1} for |mu| <= 1/2.
std::pair<double, double> bessel_k_pair(double mu, double x) {
  constexpr double eps = 1e-17;
  constexpr int max_iter = 100000;
  if (x < 2.0) {
    // Temme series
    double x2 = 0.5 * x;
    double pimu = kPi * mu;
    double fact = std::abs(pimu) < 1e-15 ? 1.0 : pimu / std::sin(pimu);
    double d = -std::log(x2);
    double e = mu * d;
    double fact2 = std::abs(e) < 1e-15 ? 1.0 : std::sinh(e) / e;
    TemmeGammas g = temme_gammas(mu);
    double ff = fact * (g.gam1 * std::cosh(e) + g.gam2 * fact2 * d);
    double sum = ff;
    e = std::exp(e);
    double p = 0.5 * e / g.gampl;
    double q = 0.5 / (e * g.gammi);
    double c = 1.0;
    d = x2 * x2;
    double sum1 = p;
    for (int i = 1; i <= max_iter; ++i) {
      double di = i;
      ff = (di * ff + p + q) / (di * di - mu * mu);
      c *= d / di;
      p /= (di - mu);
      q /= (di + mu);
      double del = c * ff;
      sum += del;
      sum1 += c * (p - di * ff);
      if (std::abs(del) < std::abs(sum) * eps) break;
    }
    return {sum, sum1 * 2.0 / x};
  }
  // Steed's continued fraction
  double b = 2.0 * (1.0 + x);
  double d = 1.0 / b;
  double h = d, delh = d;
  double q1 = 0.0, q2 = 1.0;
  double a1 = 0.25 - mu * mu;
  double q = a1, c = a1;
  double a = -a1;
  double s = 1.0 + q * delh;
  for (int i = 1; i <= max_iter; ++i) {
    a -= 2 * i;
    c = -a * c / (i + 1.0);
    double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < eps) break;
  }
  h = a1 * h;
  double kmu = std::sqrt(kPi / (2.0 * x)) * std::exp(-x) / s;
  double k1 = kmu * (mu + x + 0.5 - h) / x;
  return {kmu, k1};
}

bool is_nonpositive_integer(cplx z) {
  return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

}  // namespace

cplx log_gamma(cplx z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw std::domain_error("log_gamma: non-finite argument");
  }
  if (is_nonpositive_integer(z)) {
    throw std::domain_error("log_gamma: pole at non-positive integer " +
                            std::to_string(z.real()));
  }
  if (z.real() >= 0.5) return lanczos_log_gamma(z);
  // shift into the right half-plane; the sum of principal logs keeps the
  // cut on the negative real axis
  int shift = static_cast<int>(std::ceil(0.5 - z.real()));
  cplx acc = 0.0;
  for (int k = 0; k < shift; ++k) acc += std::log(z + static_cast<double>(k));
  return lanczos_log_gamma(z + static_cast<double>(shift)) - acc;
}

cplx gamma(cplx z) { return std::exp(log_gamma(z)); }

cplx reciprocal_gamma_pair(cplx z) { return -z * std::sin(kPi * z) / kPi; }

double bessel_k(double nu, double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw std::domain_error("bessel_k: argument must be positive");
  }
  nu = std::abs(nu);
  int nl = static_cast<int>(nu + 0.5);
  double mu = nu - nl;
  auto [kmu, k1] = bessel_k_pair(mu, x);
  for (int i = 1; i <= nl; ++i) {
    double next = (mu + i) * (2.0 / x) * k1 + kmu;
    kmu = k1;
    k1 = next;
  }
  return kmu;
}

double bessel_k_quadrature(double nu, double x) {
  if (!(x > 0.0)) throw std::domain_error("bessel_k_quadrature: argument must be positive");
  nu = std::abs(nu);
  // the integrand is analytic in |Im t| < pi/2; trapezoid error ~ exp(-pi^2/h)
  const double h = 0.02;
  double peak_log = -x;  // log-integrand at t = 0
  double sum = 0.5 * std::exp(-x);
  for (int k = 1;; ++k) {
    double t = k * h;
    double lg = -x * std::cosh(t) + nu * t + std::log1p(std::exp(-2.0 * nu * t)) - std::log(2.0);
    peak_log = std::max(peak_log, lg);
    sum += std::exp(lg);
    if (lg < peak_log - 45.0 && t > 1.0) break;
  }
  return h * sum;
}

cplx sklyanin_density(std::span<const cplx> lambda) {
  const std::size_t n = lambda.size();
  cplx value = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      cplx d = lambda[i] - lambda[j];
      if (d.imag() == 0.0 && d.real() == std::round(d.real())) {
        throw std::domain_error("sklyanin_density: lambda_" + std::to_string(i + 1) +
                                " - lambda_" + std::to_string(j + 1) +
                                " is an integer (Gamma pole)");
      }
      value *= reciprocal_gamma_pair(d);
    }
  }
  double nfact = 1.0;
  for (std::size_t k = 2; k <= n; ++k) nfact *= static_cast<double>(k);
  return value / (std::pow(cplx(0.0, 2.0 * kPi), static_cast<double>(n)) * nfact);
}

}  // namespace ptl
