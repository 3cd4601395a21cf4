#pragma once

#include <cstdint>
#include <random>

namespace ptl {

// Seed of substream `index` under `master`; splitmix64 finalizer over both.
std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // uniform on the open interval (0, 1)
  double uniform();
  double normal();
  // log of a Gamma(shape, rate 1) variate; safe for tiny shapes
  double log_gamma_variate(double shape);
  double gamma_variate(double shape);
  double exponential(double rate);
  // P(k) = (1 - q) q^k, k = 0, 1, ...
  std::uint64_t geometric(double q);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace ptl
