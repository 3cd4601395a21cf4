#include "ptl/polymer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace ptl {

std::string to_string(GeometryTag tag) {
  switch (tag) {
    case GeometryTag::point_to_point: return "point-to-point";
    case GeometryTag::flat: return "flat";
    case GeometryTag::half_flat: return "half-flat";
    case GeometryTag::restricted: return "restricted";
    case GeometryTag::symmetric: return "symmetric";
  }
  return "unknown";
}

GeometryTag geometry_tag_from_string(const std::string& name) {
  if (name == "point-to-point" || name == "p2p") return GeometryTag::point_to_point;
  if (name == "flat") return GeometryTag::flat;
  if (name == "half-flat") return GeometryTag::half_flat;
  if (name == "restricted") return GeometryTag::restricted;
  if (name == "symmetric") return GeometryTag::symmetric;
  throw std::invalid_argument("unknown geometry '" + name + "'");
}

std::string to_string(WeightKind kind) {
  switch (kind) {
    case WeightKind::inverse_gamma: return "inverse-gamma";
    case WeightKind::exponential: return "exponential";
    case WeightKind::geometric: return "geometric";
  }
  return "unknown";
}

WeightKind weight_kind_from_string(const std::string& name) {
  if (name == "inverse-gamma" || name == "log-gamma") return WeightKind::inverse_gamma;
  if (name == "exponential") return WeightKind::exponential;
  if (name == "geometric") return WeightKind::geometric;
  throw std::invalid_argument("unknown weight kind '" + name + "'");
}

Geometry Geometry::point_to_point(int p, int q) {
  if (p < 1 || q < 1) throw std::invalid_argument("point-to-point geometry needs p, q >= 1");
  return Geometry(GeometryTag::point_to_point, 0, p, q);
}

Geometry Geometry::from_tag(GeometryTag tag, int n) {
  if (n < 1) throw std::invalid_argument("geometry needs n >= 1");
  if (tag == GeometryTag::point_to_point) return point_to_point(n, n);
  return Geometry(tag, n, 2 * n, 2 * n);
}

Geometry Geometry::flat(int n) { return from_tag(GeometryTag::flat, n); }
Geometry Geometry::half_flat(int n) { return from_tag(GeometryTag::half_flat, n); }
Geometry Geometry::restricted(int n) { return from_tag(GeometryTag::restricted, n); }
Geometry Geometry::symmetric(int n) { return from_tag(GeometryTag::symmetric, n); }

IndexSet Geometry::index_set() const {
  switch (tag_) {
    case GeometryTag::point_to_point: return IndexSet::rectangle(p_, q_);
    case GeometryTag::half_flat: {
      std::vector<int> len;
      for (int i = 1; i <= n_; ++i) len.push_back(2 * n_ + 1 - i);
      return IndexSet(std::move(len));
    }
    default: return IndexSet::staircase(2 * n_);
  }
}

bool Geometry::admissible(int i, int j) const {
  if (!index_set().contains(i, j)) return false;
  return tag_ != GeometryTag::restricted || i <= j;
}

std::vector<Cell> Geometry::endpoints() const {
  std::vector<Cell> out;
  switch (tag_) {
    case GeometryTag::point_to_point: out.push_back({p_, q_}); break;
    case GeometryTag::flat:
      for (int i = 1; i <= 2 * n_; ++i) out.push_back({i, 2 * n_ + 1 - i});
      break;
    default:
      for (int i = 1; i <= n_; ++i) out.push_back({i, 2 * n_ + 1 - i});
  }
  return out;
}

int Geometry::path_cells() const {
  return tag_ == GeometryTag::point_to_point ? p_ + q_ - 1 : 2 * n_;
}

void PolymerParams::validate(const Geometry& g) const {
  const auto tag = g.tag();
  const bool mirrored = tag == GeometryTag::restricted || tag == GeometryTag::symmetric;
  if (kind == WeightKind::geometric) {
    if (tag != GeometryTag::flat) throw std::invalid_argument("geometric weights need the flat geometry");
    if (y.size() != static_cast<std::size_t>(2 * g.n())) {
      throw std::invalid_argument("geometric weights need a y-vector of length 2n");
    }
    for (double v : y)
      if (!(v > 0.0 && v < 1.0)) throw std::invalid_argument("geometric weights need 0 < y_i < 1");
    return;
  }
  const std::size_t na = tag == GeometryTag::point_to_point ? g.p() : g.n();
  const std::size_t nb = tag == GeometryTag::point_to_point ? g.q() : g.n();
  if (alpha.size() != na) throw std::invalid_argument("alpha has the wrong length for the geometry");
  if (mirrored) {
    if (!beta.empty()) throw std::invalid_argument(to_string(tag) + " geometry takes no beta");
  } else if (beta.size() != nb) {
    throw std::invalid_argument("beta has the wrong length for the geometry");
  }
  for (double a : alpha)
    if (!(a > 0.0)) throw std::invalid_argument("alpha entries must be positive");
  for (double b : beta)
    if (!(b > 0.0)) throw std::invalid_argument("beta entries must be positive");
  if (!(gamma >= 0.0)) throw std::invalid_argument("gamma must be nonnegative");
}

double cell_parameter(const PolymerParams& params, const Geometry& g, int i, int j) {
  const auto& a = params.alpha;
  const auto& b = params.beta;
  const double c = params.gamma;
  const int n = g.n();
  auto A = [&](int k) { return a[static_cast<std::size_t>(k - 1)]; };
  auto B = [&](int k) { return b[static_cast<std::size_t>(k - 1)]; };
  switch (g.tag()) {
    case GeometryTag::point_to_point: return A(i) + B(j) + c;
    case GeometryTag::flat:
    case GeometryTag::half_flat:
      if (i <= n && j <= n) return A(i) + B(j) + c;
      if (i <= n) return A(i) + A(2 * n - j + 1);
      return B(2 * n - i + 1) + B(j);
    case GeometryTag::restricted:
    case GeometryTag::symmetric: {
      if (i > j) std::swap(i, j);
      if (i == j) return A(i) + c;
      if (j <= n) return A(i) + A(j) + 2.0 * c;
      return A(i) + A(2 * n - j + 1);
    }
  }
  return 0.0;
}

double cell_gamma_rate(const Geometry& g, int i, int j) {
  return g.tag() == GeometryTag::symmetric && i == j ? 0.5 : 1.0;
}

namespace {

bool mirrored(const Geometry& g) {
  return g.tag() == GeometryTag::restricted || g.tag() == GeometryTag::symmetric;
}

// Row-major draw over the index set (upper triangle only when mirrored).
void draw(const PolymerParams& params, const Geometry& g, const IndexSet& s, Rng& rng,
          std::vector<double>& out, bool log_scale) {
  out.resize(s.size());
  const bool mirror = mirrored(g);
  const int two_n = 2 * g.n();
  for (int i = 1; i <= s.rows(); ++i) {
    for (int j = 1; j <= s.row_length(i); ++j) {
      if (mirror && i > j) continue;
      double v = 0.0;
      switch (params.kind) {
        case WeightKind::inverse_gamma: {
          double lw = std::log(cell_gamma_rate(g, i, j)) -
                      rng.log_gamma_variate(cell_parameter(params, g, i, j));
          v = log_scale ? lw : std::exp(lw);
          break;
        }
        case WeightKind::exponential: {
          double e = rng.exponential(cell_parameter(params, g, i, j));
          v = log_scale ? std::log(e) : e;
          break;
        }
        case WeightKind::geometric: {
          double q = params.y[static_cast<std::size_t>(i - 1)] *
                     params.y[static_cast<std::size_t>(two_n - j)];
          double k = static_cast<double>(rng.geometric(q));
          v = log_scale ? std::log(k) : k;
          break;
        }
      }
      out[s.offset(i, j)] = v;
    }
  }
  if (mirror) {
    for (int i = 1; i <= s.rows(); ++i)
      for (int j = 1; j < i && j <= s.row_length(i); ++j) out[s.offset(i, j)] = out[s.offset(j, i)];
  }
}

struct DPStep {
  std::size_t self;
  std::ptrdiff_t up;    // -1 when absent
  std::ptrdiff_t left;  // -1 when absent
};

struct DPPlan {
  std::vector<DPStep> steps;
  std::vector<std::size_t> ends;
  std::size_t size = 0;
  bool doubled = false;
};

DPPlan make_plan(const Geometry& g, const IndexSet& s) {
  if (!(s == g.index_set())) throw std::invalid_argument("array shape does not match the geometry");
  DPPlan plan;
  plan.size = s.size();
  for (int i = 1; i <= s.rows(); ++i) {
    for (int j = 1; j <= s.row_length(i); ++j) {
      if (!g.admissible(i, j)) continue;
      DPStep st{s.offset(i, j), -1, -1};
      if (g.admissible(i - 1, j)) st.up = static_cast<std::ptrdiff_t>(s.offset(i - 1, j));
      if (g.admissible(i, j - 1)) st.left = static_cast<std::ptrdiff_t>(s.offset(i, j - 1));
      plan.steps.push_back(st);
    }
  }
  for (Cell c : g.endpoints()) plan.ends.push_back(s.offset(c.row, c.col));
  plan.doubled = g.tag() == GeometryTag::symmetric;
  return plan;
}

double log_add(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

double log_partition_from_logs(const DPPlan& plan, const std::vector<double>& logw,
                               std::vector<double>& lz) {
  constexpr double ninf = -std::numeric_limits<double>::infinity();
  lz.assign(plan.size, ninf);
  for (const DPStep& st : plan.steps) {
    double acc = ninf;
    if (st.up >= 0) acc = lz[static_cast<std::size_t>(st.up)];
    if (st.left >= 0) acc = log_add(acc, lz[static_cast<std::size_t>(st.left)]);
    if (st.up < 0 && st.left < 0) acc = 0.0;
    lz[st.self] = logw[st.self] + acc;
  }
  double total = ninf;
  for (std::size_t e : plan.ends) total = log_add(total, lz[e]);
  return plan.doubled ? total + std::log(2.0) : total;
}

template <class T>
T lpp_from_values(const DPPlan& plan, std::span<const T> w, std::vector<T>& g) {
  g.assign(plan.size, T(0));
  for (const DPStep& st : plan.steps) {
    T best = T(0);
    bool any = false;
    if (st.up >= 0) {
      best = g[static_cast<std::size_t>(st.up)];
      any = true;
    }
    if (st.left >= 0) {
      const T& l = g[static_cast<std::size_t>(st.left)];
      if (!any || l > best) best = l;
    }
    g[st.self] = w[st.self] + best;
  }
  T out = g[plan.ends.front()];
  for (std::size_t e : plan.ends)
    if (g[e] > out) out = g[e];
  return out;
}

struct BlockStats {
  double n = 0.0, mean = 0.0, m2 = 0.0;
};

// Chan et al. pairwise combination of running moments.
void combine(BlockStats& acc, const BlockStats& b) {
  if (b.n == 0.0) return;
  double n = acc.n + b.n;
  double delta = b.mean - acc.mean;
  acc.mean += delta * b.n / n;
  acc.m2 += b.m2 + delta * delta * acc.n * b.n / n;
  acc.n = n;
}

using Sampler = std::function<double(Rng&, std::vector<double>&, std::vector<double>&)>;

MCEstimate run_blocks(const MCConfig& cfg, const Sampler& sampler) {
  if (cfg.n_samples == 0) throw std::invalid_argument("Monte Carlo needs at least one sample");
  const std::uint64_t blocks = (cfg.n_samples + kSamplesPerStream - 1) / kSamplesPerStream;
  std::vector<BlockStats> stats(blocks);
  auto worker = [&](unsigned t, unsigned nthreads) {
    std::vector<double> a, b;
    for (std::uint64_t k = t; k < blocks; k += nthreads) {
      Rng rng(substream_seed(cfg.seed, k));
      std::uint64_t lo = k * kSamplesPerStream;
      std::uint64_t hi = std::min(cfg.n_samples, lo + kSamplesPerStream);
      BlockStats st;
      for (std::uint64_t s = lo; s < hi; ++s) {
        double v = sampler(rng, a, b);
        st.n += 1.0;
        double d = v - st.mean;
        st.mean += d / st.n;
        st.m2 += d * (v - st.mean);
      }
      stats[k] = st;
    }
  };
  unsigned nthreads = std::max(1u, cfg.threads);
  if (nthreads == 1) {
    worker(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker, t, nthreads);
    for (auto& th : pool) th.join();
  }
  BlockStats total;
  for (const BlockStats& st : stats) combine(total, st);
  MCEstimate est;
  est.mean = total.mean;
  est.n_samples = cfg.n_samples;
  est.seed = cfg.seed;
  est.std_error = total.n > 1.0 ? std::sqrt(total.m2 / (total.n - 1.0) / total.n) : 0.0;
  return est;
}

}  // namespace

PolygonalArray<double> sample_weights(const PolymerParams& params, const Geometry& g, Rng& rng) {
  params.validate(g);
  IndexSet s = g.index_set();
  std::vector<double> values;
  draw(params, g, s, rng, values, false);
  if (params.kind != WeightKind::inverse_gamma) {
    // zero weights (geometric) cannot live in a positive array
    for (double v : values)
      if (!(v > 0.0)) throw std::domain_error("sample_weights: drawn weight is not positive");
  }
  return PolygonalArray<double>(std::move(s), std::move(values));
}

template <class T>
T partition_sum(const PolygonalArray<T>& w, const Geometry& g) {
  DPPlan plan = make_plan(g, w.shape());
  std::vector<T> z(plan.size, T(0));
  auto vals = w.entries();
  for (const DPStep& st : plan.steps) {
    T acc = T(0);
    if (st.up >= 0) acc += z[static_cast<std::size_t>(st.up)];
    if (st.left >= 0) acc += z[static_cast<std::size_t>(st.left)];
    if (st.up < 0 && st.left < 0) acc = T(1);
    z[st.self] = vals[st.self] * acc;
  }
  T total = T(0);
  for (std::size_t e : plan.ends) total += z[e];
  if (plan.doubled) total *= T(2);
  return total;
}

double log_partition_function(const PolygonalArray<double>& w, const Geometry& g) {
  DPPlan plan = make_plan(g, w.shape());
  std::vector<double> logw(w.entries().size()), lz;
  std::transform(w.entries().begin(), w.entries().end(), logw.begin(),
                 [](double v) { return std::log(v); });
  return log_partition_from_logs(plan, logw, lz);
}

template <class T>
T lpp_time(const PolygonalArray<T>& w, const Geometry& g) {
  DPPlan plan = make_plan(g, w.shape());
  std::vector<T> scratch;
  return lpp_from_values<T>(plan, w.entries(), scratch);
}

std::vector<std::vector<Cell>> enumerate_paths(const Geometry& g) {
  IndexSet s = g.index_set();
  if (s.size() > 30) throw std::invalid_argument("enumerate_paths: more than 30 cells");
  std::vector<Cell> ends = g.tag() == GeometryTag::symmetric ? Geometry::flat(g.n()).endpoints()
                                                             : g.endpoints();
  std::vector<std::vector<Cell>> out;
  std::vector<Cell> path{{1, 1}};
  std::function<void()> extend = [&]() {
    Cell c = path.back();
    if (std::find(ends.begin(), ends.end(), c) != ends.end()) out.push_back(path);
    for (Cell nxt : {Cell{c.row, c.col + 1}, Cell{c.row + 1, c.col}}) {
      if (!g.admissible(nxt.row, nxt.col)) continue;
      path.push_back(nxt);
      extend();
      path.pop_back();
    }
  };
  if (g.admissible(1, 1)) extend();
  return out;
}

template <class T>
T brute_force_partition_sum(const PolygonalArray<T>& w, const Geometry& g) {
  T total = T(0);
  for (const auto& path : enumerate_paths(g)) {
    T prod = T(1);
    for (Cell c : path) prod *= w.at(c);
    total += prod;
  }
  return total;
}

template <class T>
T brute_force_lpp_time(const PolygonalArray<T>& w, const Geometry& g) {
  bool first = true;
  T best = T(0);
  for (const auto& path : enumerate_paths(g)) {
    T sum = T(0);
    for (Cell c : path) sum += w.at(c);
    if (first || sum > best) best = sum;
    first = false;
  }
  return best;
}

MCEstimate mc_partition_expectation(const PolymerParams& params, const Geometry& g,
                                    const std::function<double(double)>& f, const MCConfig& cfg) {
  params.validate(g);
  if (params.kind == WeightKind::geometric) {
    throw std::invalid_argument("partition-function Monte Carlo needs continuous weights");
  }
  const IndexSet s = g.index_set();
  const DPPlan plan = make_plan(g, s);
  return run_blocks(cfg, [&](Rng& rng, std::vector<double>& logw, std::vector<double>& lz) {
    draw(params, g, s, rng, logw, true);
    return f(log_partition_from_logs(plan, logw, lz));
  });
}

MCEstimate mc_laplace_transform(const PolymerParams& params, const Geometry& g, double r,
                                const MCConfig& cfg) {
  if (!(r > 0.0)) throw std::invalid_argument("Laplace variable r must be positive");
  return mc_partition_expectation(
      params, g, [r](double logz) { return std::exp(-r * std::exp(logz)); }, cfg);
}

MCEstimate mc_lpp_cdf(const PolymerParams& params, const Geometry& g, double u,
                      const MCConfig& cfg) {
  params.validate(g);
  if (params.kind == WeightKind::inverse_gamma) {
    throw std::invalid_argument("LPP Monte Carlo needs exponential or geometric weights");
  }
  const IndexSet s = g.index_set();
  const DPPlan plan = make_plan(g, s);
  return run_blocks(cfg, [&](Rng& rng, std::vector<double>& w, std::vector<double>& scratch) {
    draw(params, g, s, rng, w, false);
    double tau = lpp_from_values<double>(plan, w, scratch);
    return tau <= u ? 1.0 : 0.0;
  });
}

template Rational partition_sum(const PolygonalArray<Rational>&, const Geometry&);
template double partition_sum(const PolygonalArray<double>&, const Geometry&);
template Rational lpp_time(const PolygonalArray<Rational>&, const Geometry&);
template double lpp_time(const PolygonalArray<double>&, const Geometry&);
template Rational brute_force_partition_sum(const PolygonalArray<Rational>&, const Geometry&);
template double brute_force_partition_sum(const PolygonalArray<double>&, const Geometry&);
template Rational brute_force_lpp_time(const PolygonalArray<Rational>&, const Geometry&);
template double brute_force_lpp_time(const PolygonalArray<double>&, const Geometry&);

}  // namespace ptl
