#include "ptl/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace ptl {

std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(master) ^ (index * 0xd1342543de82ef95ULL + 1));
}

double Rng::uniform() {
  for (;;) {
    double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    if (u > 0.0) return u;
  }
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  has_spare_ = true;
  return u * f;
}

double Rng::log_gamma_variate(double shape) {
  if (!(shape > 0.0)) throw std::invalid_argument("gamma variate: shape must be positive");
  if (shape < 1.0) {
    // G(a) = G(a+1) U^{1/a}, kept in log form
    return log_gamma_variate(shape + 1.0) + std::log(uniform()) / shape;
  }
  // Marsaglia-Tsang squeeze/rejection
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    double u = uniform();
    double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return std::log(d * v);
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return std::log(d * v);
  }
}

double Rng::gamma_variate(double shape) { return std::exp(log_gamma_variate(shape)); }

double Rng::exponential(double rate) {
  if (!(rate > 0.0)) throw std::invalid_argument("exponential variate: rate must be positive");
  return -std::log(uniform()) / rate;
}

std::uint64_t Rng::geometric(double q) {
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("geometric variate: q must lie in (0,1)");
  return static_cast<std::uint64_t>(std::floor(std::log(uniform()) / std::log(q)));
}

}  // namespace ptl
