#include "ptl/exp_poly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ptl {

cplx scaled_exp_integral(cplx c, cplx s, double u) {
  cplx cu = c * u;
  if (std::abs(cu) < 0.5) {
    // u * (e^{cu} - 1) / (cu) as a power series
    cplx term = 1.0, sum = 1.0;
    for (int k = 1; k < 30; ++k) {
      term *= cu / static_cast<double>(k + 1);
      sum += term;
      if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return std::exp(-s * u) * u * sum;
  }
  if (c.real() > 0.0) return std::exp((c - s) * u) * (1.0 - std::exp(-cu)) / c;
  return (std::exp((c - s) * u) - std::exp(-s * u)) / c;
}

double scaled_exp_integral(double c, double s, double u) {
  double cu = c * u;
  if (cu == 0.0) return u * std::exp(-s * u);
  if (c > 0.0) return std::exp((c - s) * u) * -std::expm1(-cu) / c;
  return std::exp(-s * u) * std::expm1(cu) / c;
}

double min_gap(std::span<const double> x) {
  double g = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j) g = std::min(g, std::abs(x[i] - x[j]));
  return g;
}

std::vector<std::vector<cplx>> prefix_divided_differences(const VectorFn& f, std::span<const double> nodes,
                                                          double radius) {
  const std::size_t n = nodes.size();
  if (n == 0) return {};
  if (!(radius > 0.0)) throw std::invalid_argument("prefix_divided_differences: radius must be positive");
  for (std::size_t i = 1; i < n; ++i) {
    if (nodes[i] < nodes[i - 1]) throw std::invalid_argument("prefix_divided_differences: nodes must ascend");
  }
  constexpr int kCircleNodes = 64;
  using Value = std::vector<cplx>;
  // table[i][j] = f[x_i..x_j], filled by increasing range length
  std::vector<std::vector<Value>> table(n, std::vector<Value>(n));
  auto add_scaled = [](Value& acc, const Value& v, cplx s) {
    if (acc.empty()) acc.assign(v.size(), 0.0);
    for (std::size_t k = 0; k < v.size(); ++k) acc[k] += s * v[k];
  };
  for (std::size_t i = 0; i < n; ++i) table[i][i] = f(nodes[i]);
  for (std::size_t len = 1; len < n; ++len) {
    for (std::size_t i = 0; i + len < n; ++i) {
      const std::size_t j = i + len;
      const double spread = nodes[j] - nodes[i];
      Value out;
      if (spread >= radius) {
        add_scaled(out, table[i + 1][j], 1.0 / spread);
        add_scaled(out, table[i][j - 1], -1.0 / spread);
      } else {
        const double center = 0.5 * (nodes[i] + nodes[j]);
        const double rho = spread + radius;
        for (int m = 0; m < kCircleNodes; ++m) {
          cplx dz = std::polar(rho, 2.0 * kPi * (m + 0.5) / kCircleNodes);
          cplx z = center + dz, denom = 1.0;
          for (std::size_t k = i; k <= j; ++k) denom *= z - nodes[k];
          add_scaled(out, f(z), dz / denom / static_cast<double>(kCircleNodes));
        }
      }
      table[i][j] = std::move(out);
    }
  }
  std::vector<Value> prefix;
  for (std::size_t k = 0; k < n; ++k) prefix.push_back(table[0][k]);
  return prefix;
}

Matrix<cplx> divided_difference_matrix(const std::function<cplx(cplx, cplx)>& f, std::span<const double> a,
                                       std::span<const double> b, double radius_a, double radius_b) {
  VectorFn inner = [&](cplx x) {
    auto rows = prefix_divided_differences([&](cplx y) { return std::vector<cplx>{f(x, y)}; }, b, radius_b);
    std::vector<cplx> out;
    for (const auto& r : rows) out.push_back(r[0]);
    return out;
  };
  auto outer = prefix_divided_differences(inner, a, radius_a);
  Matrix<cplx> d(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) d(i, j) = outer[i][j];
  return d;
}

}  // namespace ptl
