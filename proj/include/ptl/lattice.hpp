#pragma once

#include <functional>
#include <vector>

#include "ptl/specfun.hpp"

namespace ptl {

// Uniform trapezoid rule in log-coordinates. Every log-variable lives on the
// lattice hZ with h = 1/nodes, so nested tables line up without interpolation.
struct QuadratureSpec {
  int nodes = 4;                 // lattice points per unit of log-length
  double margin = 5.0;           // inner windows extend this far past the hull
  double tail = 1e-13;           // outer windows grow until edges fall below tail * peak
  double max_half_width = 80.0;  // outer window cap in log units
  int gl_cap = 3;
  int so_cap = 2;

  double step() const { return 1.0 / nodes; }
  void validate() const;
};

// Inclusive range of lattice indices.
struct LatticeWindow {
  int lo = 0;
  int hi = -1;
  int size() const { return hi >= lo ? hi - lo + 1 : 0; }
};

// Lattice indices covering [a - margin, b + margin].
LatticeWindow window_covering(double a, double b, double margin, double h);

// exp(-e^{k h}) for integer k, with the tails clamped to 1 and 0.
class DoubleExpTable {
 public:
  explicit DoubleExpTable(double h);
  double operator()(int k) const {
    if (k < lo_) return 1.0;
    if (k > hi_) return 0.0;
    return values_[static_cast<std::size_t>(k - lo_)];
  }

 private:
  int lo_, hi_;
  std::vector<double> values_;
};

struct LatticeSum {
  cplx value;
  double edge;  // largest |f| on the final window boundary, relative to the peak
};

// h^d times the sum of f over a box that starts at the given window and
// grows side by side until every boundary value is below tail * peak.
LatticeSum adaptive_sum_1d(const std::function<cplx(int)>& f, LatticeWindow start,
                           const QuadratureSpec& q);
LatticeSum adaptive_sum_2d(const std::function<cplx(int, int)>& f, LatticeWindow start1,
                           LatticeWindow start2, const QuadratureSpec& q);

}  // namespace ptl
