#include "ptl/whittaker.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "ptl/rng.hpp"

namespace ptl {

namespace {

int ceil_half(int i) { return (i + 1) / 2; }

// exp(c s + re) with the real part checked for underflow first
cplx exp_affine(cplx c, double s, double re) {
  double r = c.real() * s + re;
  if (r < -745.0) return 0.0;
  return std::polar(std::exp(r), c.imag() * s);
}

double max_abs_real(std::span<const cplx> v) {
  double m = 0.0;
  for (cplx c : v) m = std::max(m, std::abs(c.real()));
  return m;
}

// Margin wide enough that exp(-e^m) beats the power factors of the params.
double effective_margin(const QuadratureSpec& q, std::span<const cplx> params) {
  return q.margin + std::log1p(2.0 * max_abs_real(params));
}

// Advances a multi-index over a box; returns false after the last one.
bool next_index(std::vector<int>& k, std::span<const LatticeWindow> box) {
  for (std::size_t d = 0; d < k.size(); ++d) {
    if (k[d] < box[d].hi) {
      ++k[d];
      return true;
    }
    k[d] = box[d].lo;
  }
  return false;
}

void require_positive(std::span<const double> x, const char* who) {
  for (double v : x) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument(std::string(who) + ": arguments must be positive and finite");
    }
  }
}

std::vector<double> logs_of(std::span<const double> x) {
  std::vector<double> t(x.size());
  std::transform(x.begin(), x.end(), t.begin(), [](double v) { return std::log(v); });
  return t;
}

}  // namespace

void TriangularPattern::validate() const {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != i + 1) throw std::invalid_argument("TriangularPattern: row i needs i entries");
    for (double v : rows[i])
      if (!(v > 0.0)) throw std::invalid_argument("TriangularPattern: entries must be positive");
  }
}

void HalfTriangularPattern::validate() const {
  if (rows.size() % 2 != 0) throw std::invalid_argument("HalfTriangularPattern: depth must be even");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (static_cast<int>(rows[i].size()) != ceil_half(static_cast<int>(i) + 1)) {
      throw std::invalid_argument("HalfTriangularPattern: row i needs ceil(i/2) entries");
    }
    for (double v : rows[i])
      if (!(v > 0.0)) throw std::invalid_argument("HalfTriangularPattern: entries must be positive");
  }
}

namespace {

template <class Pattern>
std::vector<double> row_type(const Pattern& p) {
  std::vector<double> type;
  double prev = 1.0;
  for (const auto& row : p.rows) {
    double prod = std::accumulate(row.begin(), row.end(), 1.0, std::multiplies<>());
    type.push_back(prod / prev);
    prev = prod;
  }
  return type;
}

}  // namespace

PatternStatistics pattern_statistics(const TriangularPattern& p) {
  p.validate();
  PatternStatistics out{row_type(p), 0.0};
  for (int i = 1; i < p.depth(); ++i) {
    const auto& row = p.rows[static_cast<std::size_t>(i - 1)];
    const auto& below = p.rows[static_cast<std::size_t>(i)];
    for (int j = 1; j <= i; ++j) {
      double z = row[static_cast<std::size_t>(j - 1)];
      out.energy += below[static_cast<std::size_t>(j)] / z + z / below[static_cast<std::size_t>(j - 1)];
    }
  }
  return out;
}

PatternStatistics pattern_statistics(const HalfTriangularPattern& p) {
  p.validate();
  PatternStatistics out{row_type(p), 0.0};
  for (int i = 1; i < p.depth(); ++i) {
    const auto& row = p.rows[static_cast<std::size_t>(i - 1)];
    const auto& below = p.rows[static_cast<std::size_t>(i)];
    for (int j = 1; j <= ceil_half(i); ++j) {
      double z = row[static_cast<std::size_t>(j - 1)];
      double wall = j + 1 <= ceil_half(i + 1) ? below[static_cast<std::size_t>(j)] : 1.0;
      out.energy += wall / z + z / below[static_cast<std::size_t>(j - 1)];
    }
  }
  return out;
}

// ---------------------------------------------------------------- gl_n

GlWhittaker::GlWhittaker(std::vector<cplx> alpha, QuadratureSpec q)
    : alpha_(std::move(alpha)), q_(q), h_(q.step()), margin_(effective_margin(q, alpha_)) {
  q_.validate();
  if (alpha_.empty()) throw std::invalid_argument("GlWhittaker: empty parameter vector");
  if (n() > q_.gl_cap) {
    throw std::invalid_argument("GlWhittaker: n = " + std::to_string(n()) + " exceeds cap " +
                                std::to_string(q_.gl_cap));
  }
  if (n() >= 2) {
    inner_ = std::make_unique<GlWhittaker>(std::vector<cplx>(alpha_.begin(), alpha_.end() - 1), q_);
  }
}

GlWhittaker::~GlWhittaker() = default;
GlWhittaker::GlWhittaker(GlWhittaker&&) noexcept = default;

cplx GlWhittaker::operator()(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != n()) throw std::invalid_argument("GlWhittaker: dimension mismatch");
  require_positive(x, "GlWhittaker");
  return at_log(logs_of(x));
}

cplx GlWhittaker::at_log(std::span<const double> t) const {
  const int dim = n();
  if (dim == 1) return std::exp(alpha_[0] * t[0]);
  const cplx an = alpha_.back();
  std::vector<LatticeWindow> box(static_cast<std::size_t>(dim - 1));
  std::vector<std::vector<cplx>> weight(box.size());
  for (std::size_t j = 0; j < box.size(); ++j) {
    box[j] = window_covering(t[j + 1], t[j], margin_, h_);
    for (int k = box[j].lo; k <= box[j].hi; ++k) {
      double s = k * h_;
      weight[j].push_back(exp_affine(-an, s, -std::exp(t[j + 1] - s) - std::exp(s - t[j])));
    }
  }
  cplx sum = 0.0;
  if (dim == 2) {
    for (int k = box[0].lo; k <= box[0].hi; ++k)
      sum += weight[0][static_cast<std::size_t>(k - box[0].lo)] * std::exp(alpha_[0] * (k * h_));
  } else if (dim == 3) {
    // inner gl_2 values: exp(S k1 h) g(k2 - k1) by homogeneity
    const cplx s2 = alpha_[0] + alpha_[1];
    const int dlo = box[1].lo - box[0].hi, dhi = box[1].hi - box[0].lo;
    std::vector<cplx> g;
    for (int d = dlo; d <= dhi; ++d) g.push_back(inner_->reduced({d}));
    for (int k1 = box[0].lo; k1 <= box[0].hi; ++k1) {
      cplx row = 0.0;
      const auto& w2 = weight[1];
      for (int k2 = box[1].lo; k2 <= box[1].hi; ++k2) {
        row += w2[static_cast<std::size_t>(k2 - box[1].lo)] * g[static_cast<std::size_t>(k2 - k1 - dlo)];
      }
      sum += row * weight[0][static_cast<std::size_t>(k1 - box[0].lo)] * std::exp(s2 * (k1 * h_));
    }
  } else {
    std::vector<int> k(box.size());
    for (std::size_t j = 0; j < box.size(); ++j) k[j] = box[j].lo;
    do {
      cplx term = inner_->at_lattice(k);
      for (std::size_t j = 0; j < box.size(); ++j) term *= weight[j][static_cast<std::size_t>(k[j] - box[j].lo)];
      sum += term;
    } while (next_index(k, box));
  }
  double tsum = std::accumulate(t.begin(), t.end(), 0.0);
  return sum * std::pow(h_, dim - 1) * std::exp(an * tsum);
}

cplx GlWhittaker::reduced(const std::vector<int>& diffs) const {
  auto it = cache_.find(diffs);
  if (it != cache_.end()) return it->second;
  std::vector<double> t(diffs.size() + 1, 0.0);
  for (std::size_t i = 0; i < diffs.size(); ++i) t[i + 1] = diffs[i] * h_;
  cplx v = at_log(t);
  cache_.emplace(diffs, v);
  return v;
}

cplx GlWhittaker::at_lattice(std::span<const int> k) const {
  if (n() == 1) return std::exp(alpha_[0] * (k[0] * h_));
  std::vector<int> diffs;
  for (std::size_t i = 1; i < k.size(); ++i) diffs.push_back(k[i] - k[0]);
  cplx total = std::accumulate(alpha_.begin(), alpha_.end(), cplx(0.0));
  return std::exp(total * (k[0] * h_)) * reduced(diffs);
}

// ---------------------------------------------------------------- so_{2n+1}

SoWhittaker::SoWhittaker(std::vector<cplx> beta, QuadratureSpec q)
    : beta_(std::move(beta)), q_(q), h_(q.step()), margin_(effective_margin(q, beta_)) {
  q_.validate();
  if (n() > q_.so_cap) {
    throw std::invalid_argument("SoWhittaker: n = " + std::to_string(n()) + " exceeds cap " +
                                std::to_string(q_.so_cap));
  }
  if (n() >= 2) {
    inner_ = std::make_unique<SoWhittaker>(std::vector<cplx>(beta_.begin(), beta_.end() - 1), q_);
    dexp_ = std::make_unique<DoubleExpTable>(h_);
  }
}

SoWhittaker::~SoWhittaker() = default;
SoWhittaker::SoWhittaker(SoWhittaker&&) noexcept = default;

cplx SoWhittaker::operator()(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != n()) throw std::invalid_argument("SoWhittaker: dimension mismatch");
  require_positive(x, "SoWhittaker");
  return at_log(logs_of(x));
}

cplx SoWhittaker::at_log(std::span<const double> t) const {
  const int dim = n();
  if (dim == 0) return 1.0;
  const cplx bn = beta_.back();
  std::vector<double> tt(t.begin(), t.end());
  tt.push_back(0.0);  // the wall x_{n+1} = 1
  const std::size_t nv = static_cast<std::size_t>(dim);
  std::vector<LatticeWindow> vbox(nv);
  std::vector<std::vector<cplx>> f(nv);
  for (std::size_t j = 0; j < nv; ++j) {
    vbox[j] = window_covering(tt[j + 1], tt[j], margin_, h_);
    for (int k = vbox[j].lo; k <= vbox[j].hi; ++k) {
      double s = k * h_;
      f[j].push_back(exp_affine(2.0 * bn, s, -std::exp(tt[j + 1] - s) - std::exp(s - tt[j])));
    }
  }
  double tsum = std::accumulate(t.begin(), t.end(), 0.0);
  const cplx prefactor = std::exp(-bn * tsum);
  if (dim == 1) {
    cplx sum = std::accumulate(f[0].begin(), f[0].end(), cplx(0.0));
    return sum * h_ * prefactor;
  }
  const DoubleExpTable& e = *dexp_;
  const int pad = static_cast<int>(std::ceil(margin_ / h_));
  std::vector<LatticeWindow> ubox(nv - 1);
  for (std::size_t j = 0; j + 1 < nv; ++j) {
    ubox[j] = {std::min(vbox[j].lo, vbox[j + 1].lo) - pad, std::max(vbox[j].hi, vbox[j + 1].hi) + pad};
  }
  // c[j](a, b): sum over v_j of f_j(v) e(v - u_{j-1}) e(u_j - v); the first
  // and last links have one side only
  auto link = [&](std::size_t j, int a, int b, bool has_a, bool has_b) {
    cplx s = 0.0;
    for (int v = vbox[j].lo; v <= vbox[j].hi; ++v) {
      double w = (has_a ? e(v - a) : 1.0) * (has_b ? e(b - v) : 1.0);
      if (w != 0.0) s += f[j][static_cast<std::size_t>(v - vbox[j].lo)] * w;
    }
    return s;
  };
  std::vector<std::vector<cplx>> c(nv);
  std::vector<int> width(nv - 1);
  for (std::size_t j = 0; j + 1 < nv; ++j) width[j] = ubox[j].size();
  for (int b = ubox[0].lo; b <= ubox[0].hi; ++b) c[0].push_back(link(0, 0, b, false, true));
  for (std::size_t j = 1; j + 1 < nv; ++j) {
    for (int a = ubox[j - 1].lo; a <= ubox[j - 1].hi; ++a)
      for (int b = ubox[j].lo; b <= ubox[j].hi; ++b) c[j].push_back(link(j, a, b, true, true));
  }
  for (int a = ubox[nv - 2].lo; a <= ubox[nv - 2].hi; ++a) c[nv - 1].push_back(link(nv - 1, a, 0, true, false));

  cplx sum = 0.0;
  std::vector<int> k(nv - 1);
  for (std::size_t j = 0; j + 1 < nv; ++j) k[j] = ubox[j].lo;
  do {
    cplx term = c[0][static_cast<std::size_t>(k[0] - ubox[0].lo)] *
                c[nv - 1][static_cast<std::size_t>(k[nv - 2] - ubox[nv - 2].lo)];
    if (term == 0.0) continue;
    for (std::size_t j = 1; j + 1 < nv; ++j) {
      std::size_t idx = static_cast<std::size_t>((k[j - 1] - ubox[j - 1].lo) * width[j] + (k[j] - ubox[j].lo));
      term *= c[j][idx];
    }
    int ksum = std::accumulate(k.begin(), k.end(), 0);
    sum += term * inner_->at_lattice(k) * std::exp(-bn * (ksum * h_));
  } while (next_index(k, ubox));
  return sum * std::pow(h_, 2 * dim - 1) * prefactor;
}

cplx SoWhittaker::at_lattice(std::span<const int> k) const {
  std::vector<int> key(k.begin(), k.end());
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  std::vector<double> t(k.size());
  for (std::size_t i = 0; i < k.size(); ++i) t[i] = k[i] * h_;
  cplx v = at_log(t);
  cache_.emplace(std::move(key), v);
  return v;
}

cplx whittaker_gl(std::span<const cplx> alpha, std::span<const double> x, const QuadratureSpec& q) {
  if (alpha.size() != x.size()) throw std::invalid_argument("whittaker_gl: len(alpha) != len(x)");
  return GlWhittaker(std::vector<cplx>(alpha.begin(), alpha.end()), q)(x);
}

cplx whittaker_so(std::span<const cplx> beta, std::span<const double> x, const QuadratureSpec& q) {
  if (beta.size() != x.size()) throw std::invalid_argument("whittaker_so: len(beta) != len(x)");
  return SoWhittaker(std::vector<cplx>(beta.begin(), beta.end()), q)(x);
}

WhittakerValue whittaker_with_error(WhittakerFamily family, std::span<const cplx> params,
                                    std::span<const double> x, const QuadratureSpec& q) {
  QuadratureSpec fine = q;
  fine.nodes = q.nodes + std::max(1, q.nodes / 2);
  auto eval = [&](const QuadratureSpec& spec) {
    return family == WhittakerFamily::gl ? whittaker_gl(params, x, spec) : whittaker_so(params, x, spec);
  };
  cplx coarse = eval(q), refined = eval(fine);
  return {coarse, std::abs(coarse - refined)};
}

// ---------------------------------------------------------------- Monte Carlo oracle

namespace {

// log integrand in log-coordinates s: constant + linear . s - sum_k exp(offset_k + a_k . s)
struct LogIntegrand {
  struct Term {
    double offset = 0.0;
    std::vector<std::pair<std::size_t, double>> coeffs;
  };
  std::size_t dim = 0;
  double constant = 0.0;
  std::vector<double> linear;
  std::vector<Term> terms;

  double value(const std::vector<double>& s) const {
    double v = constant;
    for (std::size_t i = 0; i < dim; ++i) v += linear[i] * s[i];
    for (const Term& t : terms) v -= std::exp(exponent(t, s));
    return v;
  }
  static double exponent(const Term& t, const std::vector<double>& s) {
    double a = t.offset;
    for (auto [i, c] : t.coeffs) a += c * s[i];
    return a;
  }
};

// Entry of a pattern: a free variable or a fixed log value.
struct Slot {
  bool free;
  std::size_t index;
  double log_value;
};

void add_ratio(LogIntegrand& f, Slot num, Slot den) {
  LogIntegrand::Term t;
  if (num.free) t.coeffs.emplace_back(num.index, 1.0);
  else t.offset += num.log_value;
  if (den.free) t.coeffs.emplace_back(den.index, -1.0);
  else t.offset -= den.log_value;
  f.terms.push_back(std::move(t));
}

LogIntegrand gl_integrand(std::span<const double> alpha, std::span<const double> x) {
  const int n = static_cast<int>(alpha.size());
  LogIntegrand f;
  std::vector<std::vector<Slot>> slot(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= i; ++j) {
      if (i < n) {
        slot[static_cast<std::size_t>(i - 1)].push_back({true, f.dim++, 0.0});
        f.linear.push_back(alpha[static_cast<std::size_t>(i - 1)] - alpha[static_cast<std::size_t>(i)]);
      } else {
        slot[static_cast<std::size_t>(i - 1)].push_back({false, 0, std::log(x[static_cast<std::size_t>(j - 1)])});
        f.constant += alpha[static_cast<std::size_t>(n - 1)] * std::log(x[static_cast<std::size_t>(j - 1)]);
      }
    }
  }
  for (int i = 1; i < n; ++i) {
    for (int j = 1; j <= i; ++j) {
      const auto& row = slot[static_cast<std::size_t>(i - 1)];
      const auto& below = slot[static_cast<std::size_t>(i)];
      add_ratio(f, below[static_cast<std::size_t>(j)], row[static_cast<std::size_t>(j - 1)]);
      add_ratio(f, row[static_cast<std::size_t>(j - 1)], below[static_cast<std::size_t>(j - 1)]);
    }
  }
  return f;
}

LogIntegrand so_integrand(std::span<const double> beta, std::span<const double> x) {
  const int n = static_cast<int>(beta.size());
  auto bpm = [&](int i) {  // beta^{+-}_i
    double b = beta[static_cast<std::size_t>((i + 1) / 2 - 1)];
    return i % 2 == 1 ? b : -b;
  };
  LogIntegrand f;
  std::vector<std::vector<Slot>> slot(static_cast<std::size_t>(2 * n));
  for (int i = 1; i <= 2 * n; ++i) {
    for (int j = 1; j <= ceil_half(i); ++j) {
      if (i < 2 * n) {
        slot[static_cast<std::size_t>(i - 1)].push_back({true, f.dim++, 0.0});
        f.linear.push_back(bpm(i) - bpm(i + 1));
      } else {
        double lx = std::log(x[static_cast<std::size_t>(j - 1)]);
        slot[static_cast<std::size_t>(i - 1)].push_back({false, 0, lx});
        f.constant += bpm(2 * n) * lx;
      }
    }
  }
  const Slot wall{false, 0, 0.0};
  for (int i = 1; i < 2 * n; ++i) {
    for (int j = 1; j <= ceil_half(i); ++j) {
      const auto& row = slot[static_cast<std::size_t>(i - 1)];
      const auto& below = slot[static_cast<std::size_t>(i)];
      Slot num = j + 1 <= ceil_half(i + 1) ? below[static_cast<std::size_t>(j)] : wall;
      add_ratio(f, num, row[static_cast<std::size_t>(j - 1)]);
      add_ratio(f, row[static_cast<std::size_t>(j - 1)], below[static_cast<std::size_t>(j - 1)]);
    }
  }
  return f;
}

// In-place Cholesky of a symmetric positive definite matrix (lower factor).
bool cholesky(std::vector<double>& a, std::size_t m) {
  for (std::size_t j = 0; j < m; ++j) {
    double d = a[j * m + j];
    for (std::size_t k = 0; k < j; ++k) d -= a[j * m + k] * a[j * m + k];
    if (!(d > 0.0)) return false;
    a[j * m + j] = std::sqrt(d);
    for (std::size_t i = j + 1; i < m; ++i) {
      double v = a[i * m + j];
      for (std::size_t k = 0; k < j; ++k) v -= a[i * m + k] * a[j * m + k];
      a[i * m + j] = v / a[j * m + j];
    }
    for (std::size_t k = j + 1; k < m; ++k) a[j * m + k] = 0.0;
  }
  return true;
}

// Newton ascent of the concave log integrand; returns the mode and the
// Cholesky factor of the negative Hessian there.
std::pair<std::vector<double>, std::vector<double>> find_mode(const LogIntegrand& f) {
  const std::size_t m = f.dim;
  std::vector<double> s(m, 0.0), grad(m), hess(m * m), chol;
  for (int iter = 0; iter < 200; ++iter) {
    std::fill(grad.begin(), grad.end(), 0.0);
    std::fill(hess.begin(), hess.end(), 0.0);
    for (std::size_t i = 0; i < m; ++i) grad[i] = f.linear[i];
    for (const auto& t : f.terms) {
      double w = std::exp(LogIntegrand::exponent(t, s));
      for (auto [i, ci] : t.coeffs) {
        grad[i] -= w * ci;
        for (auto [j, cj] : t.coeffs) hess[i * m + j] += w * ci * cj;
      }
    }
    chol = hess;
    if (!cholesky(chol, m)) throw std::runtime_error("whittaker oracle: degenerate Hessian");
    // solve (L L^T) d = grad
    std::vector<double> d(grad);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t k = 0; k < i; ++k) d[i] -= chol[i * m + k] * d[k];
      d[i] /= chol[i * m + i];
    }
    for (std::size_t i = m; i-- > 0;) {
      for (std::size_t k = i + 1; k < m; ++k) d[i] -= chol[k * m + i] * d[k];
      d[i] /= chol[i * m + i];
    }
    double f0 = f.value(s), step = 1.0, gd = 0.0;
    for (std::size_t i = 0; i < m; ++i) gd += grad[i] * d[i];
    std::vector<double> trial(m);
    for (;;) {
      for (std::size_t i = 0; i < m; ++i) trial[i] = s[i] + step * d[i];
      if (f.value(trial) >= f0 + 1e-4 * step * gd || step < 1e-12) break;
      step *= 0.5;
    }
    s = trial;
    if (gd < 1e-20) break;
  }
  return {s, chol};
}

MCEstimate importance_sample(const LogIntegrand& f, std::uint64_t n_mc, std::uint64_t seed) {
  MCEstimate est;
  est.n_samples = n_mc;
  est.seed = seed;
  if (f.dim == 0) {
    est.mean = std::exp(f.value({}));
    return est;
  }
  if (n_mc < 2) throw std::invalid_argument("whittaker oracle: need at least 2 samples");
  const std::size_t m = f.dim;
  auto [mode, chol] = find_mode(f);
  const double widen = 1.5;  // proposal std relative to the Laplace approximation
  const double peak = f.value(mode);
  double log_det = 0.0;
  for (std::size_t i = 0; i < m; ++i) log_det += std::log(chol[i * m + i]);
  const double log_norm = -0.5 * static_cast<double>(m) * std::log(2.0 * kPi) + log_det -
                          static_cast<double>(m) * std::log(widen);
  Rng rng(seed);
  std::vector<double> xi(m), y(m), s(m);
  double mean = 0.0, m2 = 0.0;
  for (std::uint64_t k = 0; k < n_mc; ++k) {
    double sq = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      xi[i] = rng.normal();
      sq += xi[i] * xi[i];
    }
    // s = mode + widen * L^{-T} xi
    for (std::size_t i = m; i-- > 0;) {
      double v = xi[i];
      for (std::size_t j = i + 1; j < m; ++j) v -= chol[j * m + i] * y[j];
      y[i] = v / chol[i * m + i];
    }
    for (std::size_t i = 0; i < m; ++i) s[i] = mode[i] + widen * y[i];
    double log_q = log_norm - 0.5 * sq;
    double w = std::exp(f.value(s) - peak - log_q);
    double delta = w - mean;
    mean += delta / static_cast<double>(k + 1);
    m2 += delta * (w - mean);
  }
  double scale = std::exp(peak);
  est.mean = mean * scale;
  est.std_error = std::sqrt(m2 / static_cast<double>(n_mc - 1) / static_cast<double>(n_mc)) * scale;
  return est;
}

}  // namespace

MCEstimate whittaker_gl_oracle(std::span<const double> alpha, std::span<const double> x,
                               std::uint64_t n_mc, std::uint64_t seed) {
  if (alpha.size() != x.size() || alpha.empty()) throw std::invalid_argument("whittaker_gl_oracle: dimension mismatch");
  require_positive(x, "whittaker_gl_oracle");
  return importance_sample(gl_integrand(alpha, x), n_mc, seed);
}

MCEstimate whittaker_so_oracle(std::span<const double> beta, std::span<const double> x,
                               std::uint64_t n_mc, std::uint64_t seed) {
  if (beta.size() != x.size() || beta.empty()) throw std::invalid_argument("whittaker_so_oracle: dimension mismatch");
  require_positive(x, "whittaker_so_oracle");
  return importance_sample(so_integrand(beta, x), n_mc, seed);
}

// ---------------------------------------------------------------- number-theory route

std::vector<double> nt_convert(std::span<const double> x) {
  require_positive(x, "nt_convert");
  std::vector<double> y(x.size());
  for (std::size_t j = 0; j + 1 < x.size(); ++j) y[j] = std::sqrt(x[j + 1] / x[j]) / kPi;
  if (!x.empty()) y.back() = 1.0 / (kPi * std::sqrt(x.back()));
  return y;
}

namespace {

// Window for log t under exp(-(pi y)^2 t - 1/t): between 0 and -2 log(pi y).
LatticeWindow t_window(double y, double margin, double h) {
  return window_covering(0.0, -2.0 * std::log(kPi * y), margin, h);
}

double nt_a(std::span<const double> a, std::span<const double> y, const QuadratureSpec& q, double margin);

double nt_a_lattice(std::vector<double> a, std::vector<double> y, const QuadratureSpec& q, double margin) {
  return nt_a(a, y, q, margin);
}

double nt_a(std::span<const double> a, std::span<const double> y, const QuadratureSpec& q, double margin) {
  const std::size_t n = a.size();
  double abs_a = std::accumulate(a.begin(), a.end(), 0.0);
  if (n == 1) return std::pow(y[0], a[0]);
  if (n == 2) {
    return 2.0 * std::pow(y[0], abs_a / 2.0) * std::pow(y[1], abs_a) *
           bessel_k((a[0] - a[1]) / 2.0, 2.0 * kPi * y[0]);
  }
  const double h = q.step();
  const double nd = static_cast<double>(n);
  std::vector<double> at(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) at[i] = a[i + 1] + a[0] / (nd - 1.0);
  std::vector<LatticeWindow> box(n - 1);
  std::vector<std::vector<double>> w(n - 1);
  for (std::size_t j = 0; j + 1 < n; ++j) {
    box[j] = t_window(y[j], margin, h);
    double py = kPi * y[j];
    double jj = static_cast<double>(j + 1);
    for (int k = box[j].lo; k <= box[j].hi; ++k) {
      double t = std::exp(k * h);
      w[j].push_back(std::exp(-py * py * t - 1.0 / t + (nd - jj) * a[0] / (nd - 1.0) * std::log(py) +
                              nd * a[0] / (2.0 * (nd - 1.0)) * k * h));
    }
  }
  // inner value depends on the lattice only through the exponents of its arguments
  std::map<std::vector<int>, double> memo;
  std::vector<int> k(n - 1), key(n - 1);
  for (std::size_t j = 0; j + 1 < n; ++j) k[j] = box[j].lo;
  double sum = 0.0;
  do {
    double wt = 1.0;
    for (std::size_t j = 0; j + 1 < n; ++j) wt *= w[j][static_cast<std::size_t>(k[j] - box[j].lo)];
    if (wt == 0.0) continue;
    for (std::size_t i = 0; i + 2 < n; ++i) key[i] = k[i + 1] - k[i];
    key[n - 2] = -k[n - 2];
    auto it = memo.find(key);
    if (it == memo.end()) {
      std::vector<double> args(n - 1);
      for (std::size_t i = 0; i + 1 < n; ++i) args[i] = y[i + 1] * std::exp(0.5 * h * key[i]);
      it = memo.emplace(key, nt_a_lattice(at, args, q, margin)).first;
    }
    sum += wt * it->second;
  } while (next_index(k, box));
  return std::pow(kPi, -abs_a / 2.0) * sum * std::pow(h, static_cast<double>(n - 1));
}

double nt_b(std::span<const double> b, std::span<const double> y, const QuadratureSpec& q, double margin) {
  const std::size_t n = b.size();
  if (n == 1) return 2.0 * bessel_k(b[0], 2.0 * kPi * y[0]);
  const double h = q.step();
  const double bn = b[n - 1];
  std::vector<double> bt(b.begin(), b.end() - 1);
  // box: t_1..t_n then s_1..s_{n-1}
  std::vector<LatticeWindow> box(2 * n - 1);
  for (std::size_t j = 0; j < n; ++j) box[j] = t_window(y[j], margin, h);
  for (std::size_t j = 0; j + 1 < n; ++j) {
    double c = 2.0 * std::log(kPi * y[j]);
    double lo = c + box[j].lo * h - box[j + 1].hi * h, hi = c + box[j].hi * h - box[j + 1].lo * h;
    box[n + j] = window_covering(std::min(0.0, -hi), std::max(0.0, -lo), margin, h);
  }
  std::vector<std::vector<double>> tw(n);
  for (std::size_t j = 0; j < n; ++j) {
    double py = kPi * y[j];
    for (int k = box[j].lo; k <= box[j].hi; ++k) {
      double t = std::exp(k * h);
      double e = -py * py * t - 1.0 / t + bn * std::log(py) + (j == 0 ? bn * k * h : 0.0);
      tw[j].push_back(std::exp(e));
    }
  }
  std::map<std::vector<int>, double> memo;
  std::vector<int> k(2 * n - 1), key(n - 1);
  for (std::size_t j = 0; j < k.size(); ++j) k[j] = box[j].lo;
  double sum = 0.0;
  do {
    double wt = 1.0;
    for (std::size_t j = 0; j < n; ++j) wt *= tw[j][static_cast<std::size_t>(k[j] - box[j].lo)];
    if (wt == 0.0) continue;
    double es = 0.0;
    for (std::size_t j = 0; j + 1 < n; ++j) {
      double py = kPi * y[j];
      int kt = k[j], kt1 = k[j + 1], ks = k[n + j];
      es += -py * py * std::exp((kt - kt1 + ks) * h) - std::exp(-ks * h) + 0.5 * bn * (kt1 + ks) * h;
    }
    wt *= std::exp(es);
    if (wt == 0.0) continue;
    // argument exponents (in units of h/2)
    for (std::size_t i = 0; i + 2 < n; ++i) key[i] = k[i + 1] + k[n + i + 1] - k[i + 2] - k[n + i];
    key[n - 2] = k[n - 1] - k[2 * n - 2];
    auto it = memo.find(key);
    if (it == memo.end()) {
      std::vector<double> args(n - 1);
      for (std::size_t i = 0; i + 1 < n; ++i) args[i] = y[i + 1] * std::exp(0.5 * h * key[i]);
      it = memo.emplace(key, nt_b(bt, args, q, margin)).first;
    }
    sum += wt * it->second;
  } while (next_index(k, box));
  return sum * std::pow(h, static_cast<double>(2 * n - 1));
}

}  // namespace

cplx nt_whittaker(NtKind kind, std::span<const double> params, std::span<const double> y,
                  const QuadratureSpec& q) {
  q.validate();
  if (params.size() != y.size() || params.empty()) throw std::invalid_argument("nt_whittaker: dimension mismatch");
  require_positive(y, "nt_whittaker");
  double pmax = 0.0;
  for (double p : params) pmax = std::max(pmax, std::abs(p));
  double margin = q.margin + std::log1p(2.0 * pmax);
  return kind == NtKind::A ? nt_a(params, y, q, margin) : nt_b(params, y, q, margin);
}

}  // namespace ptl
