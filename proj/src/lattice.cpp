#include "ptl/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ptl {

void QuadratureSpec::validate() const {
  if (nodes < 1) throw std::invalid_argument("QuadratureSpec: nodes must be positive");
  if (!(margin > 0.0)) throw std::invalid_argument("QuadratureSpec: margin must be positive");
  if (!(tail > 0.0 && tail < 1.0)) throw std::invalid_argument("QuadratureSpec: tail must be in (0,1)");
  if (!(max_half_width > margin)) {
    throw std::invalid_argument("QuadratureSpec: max_half_width must exceed margin");
  }
}

LatticeWindow window_covering(double a, double b, double margin, double h) {
  return {static_cast<int>(std::floor((std::min(a, b) - margin) / h)),
          static_cast<int>(std::ceil((std::max(a, b) + margin) / h))};
}

DoubleExpTable::DoubleExpTable(double h) {
  // e^{kh} < 1e-18 gives 1 to double precision; e^{kh} > 745 underflows
  lo_ = static_cast<int>(std::floor(std::log(1e-18) / h));
  hi_ = static_cast<int>(std::ceil(std::log(745.2) / h));
  values_.reserve(static_cast<std::size_t>(hi_ - lo_ + 1));
  for (int k = lo_; k <= hi_; ++k) values_.push_back(std::exp(-std::exp(k * h)));
}

namespace {

void check_limit(int idx, int limit_lo, int limit_hi) {
  if (idx < limit_lo || idx > limit_hi) {
    throw std::runtime_error("lattice sum: integrand does not decay within max_half_width");
  }
}

}  // namespace

LatticeSum adaptive_sum_1d(const std::function<cplx(int)>& f, LatticeWindow start,
                           const QuadratureSpec& q) {
  const double h = q.step();
  const int center = (start.lo + start.hi) / 2;
  const int reach = static_cast<int>(std::ceil(q.max_half_width / h));
  const int limit_lo = center - reach, limit_hi = center + reach;
  cplx sum = 0.0;
  double peak = 0.0;
  for (int k = start.lo; k <= start.hi; ++k) {
    cplx v = f(k);
    sum += v;
    peak = std::max(peak, std::abs(v));
  }
  int lo = start.lo, hi = start.hi;
  double edge_lo = std::abs(f(lo)), edge_hi = std::abs(f(hi));
  while (edge_lo > q.tail * peak) {
    check_limit(--lo, limit_lo, limit_hi);
    cplx v = f(lo);
    sum += v;
    edge_lo = std::abs(v);
    peak = std::max(peak, edge_lo);
  }
  while (edge_hi > q.tail * peak) {
    check_limit(++hi, limit_lo, limit_hi);
    cplx v = f(hi);
    sum += v;
    edge_hi = std::abs(v);
    peak = std::max(peak, edge_hi);
  }
  double edge = peak > 0.0 ? std::max(edge_lo, edge_hi) / peak : 0.0;
  return {sum * h, edge};
}

LatticeSum adaptive_sum_2d(const std::function<cplx(int, int)>& f, LatticeWindow start1,
                           LatticeWindow start2, const QuadratureSpec& q) {
  const double h = q.step();
  const int reach = static_cast<int>(std::ceil(q.max_half_width / h));
  const int c1 = (start1.lo + start1.hi) / 2, c2 = (start2.lo + start2.hi) / 2;
  cplx sum = 0.0;
  double peak = 0.0;
  for (int a = start1.lo; a <= start1.hi; ++a) {
    for (int b = start2.lo; b <= start2.hi; ++b) {
      cplx v = f(a, b);
      sum += v;
      peak = std::max(peak, std::abs(v));
    }
  }
  LatticeWindow w1 = start1, w2 = start2;
  auto row_max = [&](int a) {
    double m = 0.0;
    for (int b = w2.lo; b <= w2.hi; ++b) m = std::max(m, std::abs(f(a, b)));
    return m;
  };
  auto col_max = [&](int b) {
    double m = 0.0;
    for (int a = w1.lo; a <= w1.hi; ++a) m = std::max(m, std::abs(f(a, b)));
    return m;
  };
  // edges[0..3]: low/high side of axis 1, low/high side of axis 2
  double edges[4] = {row_max(w1.lo), row_max(w1.hi), col_max(w2.lo), col_max(w2.hi)};
  for (bool grew = true; grew;) {
    grew = false;
    for (int side = 0; side < 4; ++side) {
      while (edges[side] > q.tail * peak) {
        grew = true;
        cplx strip = 0.0;
        double m = 0.0;
        if (side < 2) {
          int a = side == 0 ? --w1.lo : ++w1.hi;
          check_limit(a, c1 - reach, c1 + reach);
          for (int b = w2.lo; b <= w2.hi; ++b) {
            cplx v = f(a, b);
            strip += v;
            m = std::max(m, std::abs(v));
            if (b == w2.lo) edges[2] = std::max(edges[2], std::abs(v));
            if (b == w2.hi) edges[3] = std::max(edges[3], std::abs(v));
          }
        } else {
          int b = side == 2 ? --w2.lo : ++w2.hi;
          check_limit(b, c2 - reach, c2 + reach);
          for (int a = w1.lo; a <= w1.hi; ++a) {
            cplx v = f(a, b);
            strip += v;
            m = std::max(m, std::abs(v));
            if (a == w1.lo) edges[0] = std::max(edges[0], std::abs(v));
            if (a == w1.hi) edges[1] = std::max(edges[1], std::abs(v));
          }
        }
        sum += strip;
        edges[side] = m;
        peak = std::max(peak, m);
      }
    }
  }
  double edge = 0.0;
  for (double e : edges) edge = std::max(edge, e);
  return {sum * h * h, peak > 0.0 ? edge / peak : 0.0};
}

}  // namespace ptl
