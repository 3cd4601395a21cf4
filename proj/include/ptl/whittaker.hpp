#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <vector>

#include "ptl/lattice.hpp"
#include "ptl/polymer.hpp"
#include "ptl/specfun.hpp"

namespace ptl {

// Geometric Gelfand-Tsetlin pattern; rows[i-1] holds z_{i,1..i}.
struct TriangularPattern {
  std::vector<std::vector<double>> rows;
  int depth() const { return static_cast<int>(rows.size()); }
  void validate() const;
};

// Half-triangular pattern of depth 2n; rows[i-1] holds z_{i,1..ceil(i/2)}.
struct HalfTriangularPattern {
  std::vector<std::vector<double>> rows;
  int depth() const { return static_cast<int>(rows.size()); }
  void validate() const;
};

struct PatternStatistics {
  std::vector<double> type;
  double energy = 0.0;
};

PatternStatistics pattern_statistics(const TriangularPattern& p);
// Entries off the half-triangle count as 1 in the energy (the wall).
PatternStatistics pattern_statistics(const HalfTriangularPattern& p);

// gl_n Whittaker function by the recursion over the kernel Q^{gl_n}, every
// layer a lattice trapezoid sum in log-coordinates. Caches inner layers, so
// one instance is not safe for concurrent use.
class GlWhittaker {
 public:
  GlWhittaker(std::vector<cplx> alpha, QuadratureSpec q = {});
  ~GlWhittaker();
  GlWhittaker(GlWhittaker&&) noexcept;

  int n() const { return static_cast<int>(alpha_.size()); }
  cplx operator()(std::span<const double> x) const;
  // argument given as t = log x
  cplx at_log(std::span<const double> t) const;
  // t = k h on the lattice; uses homogeneity and a cache of reduced values
  cplx at_lattice(std::span<const int> k) const;

 private:
  cplx reduced(const std::vector<int>& diffs) const;

  std::vector<cplx> alpha_;
  QuadratureSpec q_;
  double h_, margin_;
  std::unique_ptr<GlWhittaker> inner_;
  mutable std::map<std::vector<int>, cplx> cache_;
};

// so_{2n+1} Whittaker function by the recursion with the v-integrated kernel
// Q^{so_{2n+1}} (x_{n+1} = 1). Same caching caveat as GlWhittaker.
class SoWhittaker {
 public:
  SoWhittaker(std::vector<cplx> beta, QuadratureSpec q = {});
  ~SoWhittaker();
  SoWhittaker(SoWhittaker&&) noexcept;

  int n() const { return static_cast<int>(beta_.size()); }
  cplx operator()(std::span<const double> x) const;
  cplx at_log(std::span<const double> t) const;
  cplx at_lattice(std::span<const int> k) const;

 private:
  std::vector<cplx> beta_;
  QuadratureSpec q_;
  double h_, margin_;
  std::unique_ptr<SoWhittaker> inner_;
  std::unique_ptr<DoubleExpTable> dexp_;
  mutable std::map<std::vector<int>, cplx> cache_;
};

cplx whittaker_gl(std::span<const cplx> alpha, std::span<const double> x,
                  const QuadratureSpec& q = {});
cplx whittaker_so(std::span<const cplx> beta, std::span<const double> x,
                  const QuadratureSpec& q = {});

enum class WhittakerFamily { gl, so };

struct WhittakerValue {
  cplx value;
  double est_error = 0.0;  // difference against a run with 1.5x the nodes
};

WhittakerValue whittaker_with_error(WhittakerFamily family, std::span<const cplx> params,
                                    std::span<const double> x, const QuadratureSpec& q = {});

// Importance-sampled Monte Carlo of the pattern integral: Gaussian proposal in
// log-coordinates centred at the (unique) mode of the concave log-integrand.
MCEstimate whittaker_gl_oracle(std::span<const double> alpha, std::span<const double> x,
                               std::uint64_t n_mc, std::uint64_t seed);
MCEstimate whittaker_so_oracle(std::span<const double> beta, std::span<const double> x,
                               std::uint64_t n_mc, std::uint64_t seed);

// Number-theory parametrization: y_j = sqrt(x_{j+1}/x_j)/pi, y_n = 1/(pi sqrt(x_n)).
std::vector<double> nt_convert(std::span<const double> x);

enum class NtKind { A, B };

// W^A_{n,a}(y) and W^B_{n,b}(y) from their own recursive integral
// representations (Macdonald base cases), independent of GlWhittaker and
// SoWhittaker. Real parameters only.
cplx nt_whittaker(NtKind kind, std::span<const double> params, std::span<const double> y,
                  const QuadratureSpec& q = {});

}  // namespace ptl
