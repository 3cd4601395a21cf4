#include "ptl/schur.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include "ptl/exp_poly.hpp"
#include "ptl/numerics.hpp"

namespace ptl {

void validate_partition(std::span<const int> mu) {
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (mu[i] < 0) throw std::invalid_argument("partition parts must be nonnegative");
    if (i > 0 && mu[i] > mu[i - 1]) throw std::invalid_argument("partition parts must be weakly decreasing");
  }
}

namespace {

std::vector<int> padded(std::span<const int> mu, std::size_t n) {
  validate_partition(mu);
  std::vector<int> out(mu.begin(), mu.end());
  while (out.size() > n && out.back() == 0) out.pop_back();
  if (out.size() > n) throw std::invalid_argument("partition has more parts than variables");
  out.resize(n, 0);
  return out;
}

template <class T>
T ipow(const T& x, int e) {
  if (e < 0) return T(1) / ipow(x, -e);
  T r(1), b = x;
  while (e > 0) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

template <class T>
bool has_repeat(std::span<const T> y) {
  for (std::size_t i = 0; i < y.size(); ++i)
    for (std::size_t j = i + 1; j < y.size(); ++j)
      if (y[i] == y[j]) return true;
  return false;
}

// h_0..h_max complete homogeneous symmetric polynomials
template <class T>
std::vector<T> complete_homogeneous(std::span<const T> y, int max_degree) {
  std::vector<T> h(static_cast<std::size_t>(max_degree + 1), T(0));
  h[0] = T(1);
  for (const T& v : y)
    for (int k = 1; k <= max_degree; ++k) h[static_cast<std::size_t>(k)] += v * h[static_cast<std::size_t>(k - 1)];
  return h;
}

template <class T>
T jacobi_trudi(const std::vector<int>& mu, std::span<const T> y) {
  std::size_t len = mu.size();
  while (len > 0 && mu[len - 1] == 0) --len;
  if (len == 0) return T(1);
  const int top = mu[0] + static_cast<int>(len);
  std::vector<T> h = complete_homogeneous(y, top);
  Matrix<T> m(len, len);
  for (std::size_t i = 0; i < len; ++i) {
    for (std::size_t j = 0; j < len; ++j) {
      int k = mu[i] - static_cast<int>(i) + static_cast<int>(j);
      m(i, j) = k < 0 ? T(0) : h[static_cast<std::size_t>(k)];
    }
  }
  return determinant(m);
}

template <class T>
T bialternant(const std::vector<int>& mu, std::span<const T> y) {
  const std::size_t n = y.size();
  Matrix<T> num(n, n), den(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      int shift = static_cast<int>(n - 1 - i);
      num(i, j) = ipow(y[j], mu[i] + shift);
      den(i, j) = ipow(y[j], shift);
    }
  }
  return determinant(num) / determinant(den);
}

// P_m(t) with x^m - x^{-m} = (x - 1/x) P_m(x + 1/x); coefficients low to high.
std::vector<long long> chebyshev_factor(int m) {
  std::vector<long long> prev{0}, cur{1};  // P_0, P_1
  if (m == 0) return prev;
  for (int k = 1; k < m; ++k) {
    std::vector<long long> next(cur.size() + 1, 0);
    for (std::size_t i = 0; i < cur.size(); ++i) next[i + 1] += cur[i];
    for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= prev[i];
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

// p[t_1..t_k] for k = 1..n via repeated synthetic division; exact with repeated nodes.
template <class T>
std::vector<T> polynomial_prefix_dd(std::vector<T> p, std::span<const T> t) {
  std::vector<T> out;
  for (std::size_t k = 0; k < t.size(); ++k) {
    // evaluate p at t_k and divide by (x - t_k)
    std::vector<T> q(p.size() > 1 ? p.size() - 1 : 0, T(0));
    T acc(0);
    for (std::size_t i = p.size(); i-- > 0;) {
      acc = acc * t[k] + p[i];
      if (i > 0) q[i - 1] = acc;
    }
    out.push_back(acc);
    p = std::move(q);
    if (p.empty()) p.push_back(T(0));
  }
  return out;
}

template <class T>
T sp_weyl(const std::vector<int>& mu, std::span<const T> y) {
  const std::size_t n = y.size();
  std::vector<T> t;
  for (const T& v : y) {
    if (v == T(0)) throw std::invalid_argument("sp_poly: variables must be nonzero");
    t.push_back(v + T(1) / v);
  }
  // det(P_{m_i}(t_j)) / prod_{i<j}(t_i - t_j) = (-1)^{n(n-1)/2} det(P_{m_i}[t_1..t_j])
  Matrix<T> g(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    auto c = chebyshev_factor(mu[i] + static_cast<int>(n - i));
    std::vector<T> coeffs;
    for (long long v : c) coeffs.push_back(T(static_cast<double>(v)));
    auto dd = polynomial_prefix_dd(std::move(coeffs), std::span<const T>(t));
    for (std::size_t j = 0; j < n; ++j) g(i, j) = dd[j];
  }
  T d = determinant(g);
  return (n * (n - 1) / 2) % 2 ? -d : d;
}

// Integer symplectic GT patterns of depth 2n with bottom row mu.
template <class T>
T sp_gt(const std::vector<int>& mu, std::span<const T> y) {
  const int n = static_cast<int>(y.size());
  const int depth = 2 * n;
  auto row_len = [](int i) { return (i + 1) / 2; };
  std::vector<std::vector<int>> z(static_cast<std::size_t>(depth + 1));
  z[static_cast<std::size_t>(depth)] = mu;
  T total(0);
  std::function<void(int, int)> fill = [&](int i, int j) {
    if (i == 0) {
      T w(1);
      std::vector<int> sums(static_cast<std::size_t>(depth + 1), 0);
      for (int r = 1; r <= depth; ++r)
        for (int v : z[static_cast<std::size_t>(r)]) sums[static_cast<std::size_t>(r)] += v;
      for (int k = 1; k <= n; ++k) {
        int e = 2 * sums[static_cast<std::size_t>(2 * k - 1)] - sums[static_cast<std::size_t>(2 * k - 2)] -
                sums[static_cast<std::size_t>(2 * k)];
        w *= ipow(y[static_cast<std::size_t>(k - 1)], e);
      }
      total += w;
      return;
    }
    if (j > row_len(i)) {
      fill(i - 1, 1);
      return;
    }
    const auto& below = z[static_cast<std::size_t>(i + 1)];
    int hi = below[static_cast<std::size_t>(j - 1)];
    int lo = j + 1 <= row_len(i + 1) ? below[static_cast<std::size_t>(j)] : 0;
    auto& row = z[static_cast<std::size_t>(i)];
    row.resize(static_cast<std::size_t>(row_len(i)));
    for (int v = lo; v <= hi; ++v) {
      row[static_cast<std::size_t>(j - 1)] = v;
      fill(i, j + 1);
    }
  };
  fill(depth - 1, 1);
  return total;
}

}  // namespace

template <class T>
T schur_poly(std::span<const int> mu, std::span<const T> y, SchurRoute route) {
  auto m = padded(mu, y.size());
  if (route == SchurRoute::jacobi_trudi || has_repeat(y)) return jacobi_trudi(m, y);
  return bialternant(m, y);
}

template <class T>
T schur_poly_tableaux(std::span<const int> mu, std::span<const T> y) {
  auto m = padded(mu, y.size());
  const int n = static_cast<int>(y.size());
  std::vector<std::vector<int>> tab;
  for (int len : m)
    if (len > 0) tab.emplace_back(static_cast<std::size_t>(len), 0);
  T total(0);
  std::function<void(std::size_t, std::size_t)> fill = [&](std::size_t r, std::size_t c) {
    if (r == tab.size()) {
      T w(1);
      for (const auto& row : tab)
        for (int v : row) w *= y[static_cast<std::size_t>(v - 1)];
      total += w;
      return;
    }
    if (c == tab[r].size()) {
      fill(r + 1, 0);
      return;
    }
    int lo = 1;
    if (c > 0) lo = std::max(lo, tab[r][c - 1]);
    if (r > 0) lo = std::max(lo, tab[r - 1][c] + 1);
    for (int v = lo; v <= n; ++v) {
      tab[r][c] = v;
      fill(r, c + 1);
    }
  };
  fill(0, 0);
  return total;
}

template <class T>
T sp_poly(std::span<const int> mu, std::span<const T> y, SpRoute route) {
  if (y.empty()) throw std::invalid_argument("sp_poly: need at least one variable");
  auto m = padded(mu, y.size());
  for (const T& v : y)
    if (v == T(0)) throw std::invalid_argument("sp_poly: variables must be nonzero");
  return route == SpRoute::weyl ? sp_weyl(m, y) : sp_gt(m, y);
}

template double schur_poly(std::span<const int>, std::span<const double>, SchurRoute);
template Rational schur_poly(std::span<const int>, std::span<const Rational>, SchurRoute);
template double schur_poly_tableaux(std::span<const int>, std::span<const double>);
template Rational schur_poly_tableaux(std::span<const int>, std::span<const Rational>);
template double sp_poly(std::span<const int>, std::span<const double>, SpRoute);
template Rational sp_poly(std::span<const int>, std::span<const Rational>, SpRoute);

// ---------------------------------------------------------------- continuum

namespace {

void require_ordered(std::span<const double> x, bool nonnegative, const char* who) {
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (x[i] > x[i - 1]) throw std::invalid_argument(std::string(who) + ": x must be weakly decreasing");
  }
  if (nonnegative && !x.empty() && x.back() < 0.0) {
    throw std::invalid_argument(std::string(who) + ": x must be nonnegative");
  }
}

// 2 sinh(sqrt(w) x) / sqrt(w), entire in w
cplx sinh_kernel(cplx w, double x) {
  cplx z = w * x * x;
  if (std::abs(z) < 1.0) {
    cplx term = 1.0, sum = 1.0;
    for (int k = 1; k < 30; ++k) {
      term *= z / static_cast<double>((2 * k) * (2 * k + 1));
      sum += term;
    }
    return 2.0 * x * sum;
  }
  cplx r = std::sqrt(w);
  return 2.0 * std::sinh(r * x) / r;
}

double sign_of_reversal(std::size_t n) { return (n * (n - 1) / 2) % 2 ? -1.0 : 1.0; }

// det(g_i(v_j)) / prod_{i<j}(v_i - v_j) with divided differences in v
double alternant_ratio(const std::function<cplx(cplx, std::size_t)>& g, std::vector<double> v, double radius) {
  const std::size_t n = v.size();
  if (min_gap(v) >= kConfluenceThreshold) {
    Matrix<double> m(n, n);
    double den = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) m(i, j) = g(v[j], i).real();
      for (std::size_t j = i + 1; j < n; ++j) den *= v[i] - v[j];
    }
    return determinant(m) / den;
  }
  std::sort(v.begin(), v.end());
  auto dd = prefix_divided_differences(
      [&](cplx w) {
        std::vector<cplx> out(n);
        for (std::size_t i = 0; i < n; ++i) out[i] = g(w, i);
        return out;
      },
      v, radius);
  Matrix<double> m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = dd[j][i].real();
  return sign_of_reversal(n) * determinant(m);
}

}  // namespace

double sp_cont(std::span<const double> alpha, std::span<const double> x) {
  if (alpha.size() != x.size() || x.empty()) throw std::invalid_argument("sp_cont: dimension mismatch");
  require_ordered(x, true, "sp_cont");
  // in w = alpha^2 the ratio is det(2 sinh(sqrt(w_j) x_i)/sqrt(w_j)) / (2^n prod_{i<j}(w_i - w_j))
  std::vector<double> w;
  for (double a : alpha) w.push_back(a * a);
  const double radius = std::min(0.25, 1.0 / (1.0 + x[0] * x[0]));
  double r = alternant_ratio([&](cplx v, std::size_t i) { return sinh_kernel(v, x[i]); }, w, radius);
  return r / std::pow(2.0, static_cast<double>(x.size()));
}

double s_cont(std::span<const double> beta, std::span<const double> x) {
  if (beta.size() != x.size() || x.empty()) throw std::invalid_argument("s_cont: dimension mismatch");
  require_ordered(x, false, "s_cont");
  double span_x = std::max(std::abs(x.front()), std::abs(x.back()));
  const double radius = std::min(0.25, 1.0 / (1.0 + span_x));
  return alternant_ratio([&](cplx b, std::size_t i) { return std::exp(b * x[i]); },
                         std::vector<double>(beta.begin(), beta.end()), radius);
}

namespace {

// Nested Gauss-Legendre over a continuous GT polytope. rows[i] has
// row_len(i) entries, rows[top] is fixed; entry (i, j) ranges over
// [rows[i+1][j+1] (0 past the end), rows[i+1][j]].
double gt_polytope(int top, const std::function<int(int)>& row_len,
                   const std::function<double(const std::vector<std::vector<double>>&)>& log_weight,
                   std::span<const double> x, int order) {
  const GaussRule& rule = gauss_legendre(order);
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(top + 1));
  rows[static_cast<std::size_t>(top)].assign(x.begin(), x.end());
  for (int i = 1; i < top; ++i) rows[static_cast<std::size_t>(i)].assign(static_cast<std::size_t>(row_len(i)), 0.0);
  std::function<double(int, int)> nest = [&](int i, int j) -> double {
    if (i == 0) return std::exp(log_weight(rows));
    if (j > row_len(i)) return nest(i - 1, 1);
    const auto& below = rows[static_cast<std::size_t>(i + 1)];
    double hi = below[static_cast<std::size_t>(j - 1)];
    double lo = j + 1 <= row_len(i + 1) ? below[static_cast<std::size_t>(j)] : 0.0;
    if (hi <= lo) return 0.0;
    double mid = 0.5 * (hi + lo), half = 0.5 * (hi - lo), sum = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j - 1)] = mid + half * rule.nodes[k];
      sum += rule.weights[k] * nest(i, j + 1);
    }
    return half * sum;
  };
  return nest(top - 1, 1);
}

double row_sum(const std::vector<double>& r) {
  double s = 0.0;
  for (double v : r) s += v;
  return s;
}

}  // namespace

double sp_cont_polytope_oracle(std::span<const double> alpha, std::span<const double> x, int order) {
  const int n = static_cast<int>(x.size());
  if (alpha.size() != x.size() || n == 0) throw std::invalid_argument("sp_cont_polytope_oracle: dimension mismatch");
  if (n > 2) throw std::invalid_argument("sp_cont_polytope_oracle: n <= 2 only");
  require_ordered(x, true, "sp_cont_polytope_oracle");
  auto log_weight = [&](const std::vector<std::vector<double>>& rows) {
    double e = 0.0;
    for (int k = 1; k <= n; ++k) {
      double prev = k == 1 ? 0.0 : row_sum(rows[static_cast<std::size_t>(2 * k - 2)]);
      e += alpha[static_cast<std::size_t>(k - 1)] *
           (2.0 * row_sum(rows[static_cast<std::size_t>(2 * k - 1)]) - prev - row_sum(rows[static_cast<std::size_t>(2 * k)]));
    }
    return e;
  };
  return gt_polytope(2 * n, [](int i) { return (i + 1) / 2; }, log_weight, x, order);
}

double s_cont_polytope_oracle(std::span<const double> beta, std::span<const double> x, int order) {
  const int n = static_cast<int>(x.size());
  if (beta.size() != x.size() || n == 0) throw std::invalid_argument("s_cont_polytope_oracle: dimension mismatch");
  if (n > 3) throw std::invalid_argument("s_cont_polytope_oracle: n <= 3 only");
  require_ordered(x, false, "s_cont_polytope_oracle");
  if (n == 1) return std::exp(beta[0] * x[0]);
  auto log_weight = [&](const std::vector<std::vector<double>>& rows) {
    double e = 0.0, prev = 0.0;
    for (int k = 1; k <= n; ++k) {
      double cur = row_sum(rows[static_cast<std::size_t>(k)]);
      e += beta[static_cast<std::size_t>(k - 1)] * (cur - prev);
      prev = cur;
    }
    return e;
  };
  // gl rows have k entries and no zero padding: entry (i, j) in [z_{i+1,j+1}, z_{i+1,j}]
  return gt_polytope(n, [](int i) { return i; }, log_weight, x, order);
}

}  // namespace ptl
