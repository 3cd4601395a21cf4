#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ptl/grsk.hpp"
#include "ptl/rng.hpp"

namespace ptl {

enum class GeometryTag { point_to_point, flat, half_flat, restricted, symmetric };

std::string to_string(GeometryTag tag);
GeometryTag geometry_tag_from_string(const std::string& name);

// Endpoint geometry of a directed polymer. `n` is half the path length 2n;
// point-to-point uses the rectangle p x q instead.
class Geometry {
 public:
  static Geometry point_to_point(int p, int q);
  static Geometry flat(int n);
  static Geometry half_flat(int n);
  static Geometry restricted(int n);
  static Geometry symmetric(int n);
  static Geometry from_tag(GeometryTag tag, int n);

  GeometryTag tag() const { return tag_; }
  int n() const { return n_; }
  int p() const { return p_; }
  int q() const { return q_; }

  // storage shape of weight arrays; restricted and symmetric use the full
  // staircase with mirrored entries
  IndexSet index_set() const;
  // cells a path may visit
  bool admissible(int i, int j) const;
  // endpoints summed over by the partition function
  std::vector<Cell> endpoints() const;
  int path_cells() const;

 private:
  Geometry(GeometryTag tag, int n, int p, int q) : tag_(tag), n_(n), p_(p), q_(q) {}
  GeometryTag tag_;
  int n_, p_, q_;
};

enum class WeightKind { inverse_gamma, exponential, geometric };

std::string to_string(WeightKind kind);
WeightKind weight_kind_from_string(const std::string& name);

struct PolymerParams {
  std::vector<double> alpha;
  std::vector<double> beta;  // unused for restricted / symmetric
  double gamma = 0.0;
  WeightKind kind = WeightKind::inverse_gamma;
  std::vector<double> y;  // geometric kind only, length 2n

  void validate(const Geometry& g) const;
};

struct MCEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 0;
};

// Gamma shape (inverse-gamma kind) or rate (exponential kind) of cell (i,j).
double cell_parameter(const PolymerParams& params, const Geometry& g, int i, int j);
// Gamma rate of cell (i,j) for the inverse-gamma kind: 1/2 on the symmetric
// diagonal, 1 elsewhere.
double cell_gamma_rate(const Geometry& g, int i, int j);

PolygonalArray<double> sample_weights(const PolymerParams& params, const Geometry& g, Rng& rng);

template <class T>
T partition_sum(const PolygonalArray<T>& w, const Geometry& g);
double log_partition_function(const PolygonalArray<double>& w, const Geometry& g);
template <class T>
T lpp_time(const PolygonalArray<T>& w, const Geometry& g);

std::vector<std::vector<Cell>> enumerate_paths(const Geometry& g);
template <class T>
T brute_force_partition_sum(const PolygonalArray<T>& w, const Geometry& g);
template <class T>
T brute_force_lpp_time(const PolygonalArray<T>& w, const Geometry& g);

struct MCConfig {
  std::uint64_t n_samples = 1000000;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

// Mean of f(log Z) over independent weight draws.
MCEstimate mc_partition_expectation(const PolymerParams& params, const Geometry& g,
                                    const std::function<double(double)>& f, const MCConfig& cfg);
MCEstimate mc_laplace_transform(const PolymerParams& params, const Geometry& g, double r,
                                const MCConfig& cfg);
MCEstimate mc_lpp_cdf(const PolymerParams& params, const Geometry& g, double u,
                      const MCConfig& cfg);

// Samples per substream; substream k covers samples [k*B, (k+1)*B).
inline constexpr std::uint64_t kSamplesPerStream = 1024;

}  // namespace ptl
