#include <doctest.h>

#include <cmath>
#include <random>

#include "ptl/polymer.hpp"

using ptl::Cell;
using ptl::Geometry;
using ptl::PolygonalArray;
using ptl::PolymerParams;
using ptl::Rational;
using ptl::WeightKind;

namespace {

PolygonalArray<Rational> random_rational(std::mt19937_64& gen, const Geometry& g, bool symmetric) {
  std::uniform_int_distribution<int> d(1, 9);
  auto s = g.index_set();
  PolygonalArray<Rational> w(s, Rational(1));
  for (Cell c : s.cells()) {
    Rational q(d(gen), d(gen));
    q.canonicalize();
    w(c.row, c.col) = q;
  }
  if (symmetric)
    for (Cell c : s.cells())
      if (c.row > c.col) w(c.row, c.col) = w(c.col, c.row);
  return w;
}

}  // namespace

TEST_CASE("partition function small examples") {
  std::mt19937_64 gen(1);
  auto p2p = Geometry::point_to_point(2, 2);
  auto w = random_rational(gen, p2p, false);
  CHECK(ptl::partition_sum(w, p2p) == w(1, 1) * w(1, 2) * w(2, 2) + w(1, 1) * w(2, 1) * w(2, 2));

  auto flat = Geometry::flat(1);
  auto wf = random_rational(gen, flat, false);
  CHECK(ptl::partition_sum(wf, flat) == wf(1, 1) * wf(1, 2) + wf(1, 1) * wf(2, 1));
  CHECK(ptl::lpp_time(wf, flat) == wf(1, 1) + std::max(wf(1, 2), wf(2, 1)));

  auto restr = Geometry::restricted(1);
  auto wr = random_rational(gen, restr, true);
  CHECK(ptl::partition_sum(wr, restr) == wr(1, 1) * wr(1, 2));
  CHECK(ptl::lpp_time(wr, restr) == wr(1, 1) + wr(1, 2));

  PolygonalArray<double> wd(flat.index_set(), std::vector<double>{2.0, 3.0, 5.0});
  CHECK(std::abs(ptl::log_partition_function(wd, flat) - std::log(16.0)) < 1e-14);
}

TEST_CASE("path enumeration counts") {
  CHECK(ptl::enumerate_paths(Geometry::point_to_point(2, 2)).size() == 2);
  CHECK(ptl::enumerate_paths(Geometry::flat(2)).size() == 8);
  CHECK(ptl::enumerate_paths(Geometry::restricted(1)).size() == 1);
  CHECK(ptl::enumerate_paths(Geometry::half_flat(2)).size() == 4);
  for (const auto& path : ptl::enumerate_paths(Geometry::flat(3))) CHECK(path.size() == 6);
  CHECK_THROWS(ptl::enumerate_paths(Geometry::flat(4)));
}

TEST_CASE("dynamic programming equals brute force in every geometry") {
  std::mt19937_64 gen(8);
  for (int n = 1; n <= 3; ++n) {
    for (auto tag : {ptl::GeometryTag::flat, ptl::GeometryTag::half_flat,
                     ptl::GeometryTag::restricted, ptl::GeometryTag::symmetric}) {
      Geometry g = Geometry::from_tag(tag, n);
      bool sym = tag == ptl::GeometryTag::restricted || tag == ptl::GeometryTag::symmetric;
      auto w = random_rational(gen, g, sym);
      CHECK(ptl::partition_sum(w, g) == ptl::brute_force_partition_sum(w, g));
      CHECK(ptl::lpp_time(w, g) == ptl::brute_force_lpp_time(w, g));
    }
    Geometry p2p = Geometry::point_to_point(n + 1, n + 2);
    auto w = random_rational(gen, p2p, false);
    CHECK(ptl::partition_sum(w, p2p) == ptl::brute_force_partition_sum(w, p2p));
  }
}

TEST_CASE("border endpoints agree with gRSK output") {
  std::mt19937_64 gen(12);
  Geometry g = Geometry::flat(2);
  auto w = random_rational(gen, g, false);
  auto t = ptl::grsk(w);
  for (Cell c : g.endpoints()) {
    auto p2p = Geometry::point_to_point(c.row, c.col);
    PolygonalArray<Rational> sub(p2p.index_set(), Rational(1));
    for (Cell d : p2p.index_set().cells()) sub(d.row, d.col) = w.at(d);
    CHECK(ptl::partition_sum(sub, p2p) == t.at(c));
  }
}

TEST_CASE("zero-temperature agreement of log Z with LPP") {
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> d(0.0, 3.0);
  Geometry g = Geometry::flat(2);
  auto s = g.index_set();
  std::vector<double> logs(s.size());
  for (double& v : logs) v = d(gen);
  const double eps = 0.02;
  std::vector<double> scaled(logs.size());
  for (std::size_t k = 0; k < logs.size(); ++k) scaled[k] = std::exp(logs[k] / eps);
  PolygonalArray<double> wz(s, scaled), wl(s, logs);
  double lhs = eps * ptl::log_partition_function(wz, g);
  // 0 <= eps log Z - L <= eps log(#paths)
  double gap = lhs - ptl::lpp_time(wl, g);
  CHECK(gap >= -1e-12);
  CHECK(gap <= eps * std::log(8.0) + 1e-12);
}

TEST_CASE("sampler laws") {
  PolymerParams p;
  p.alpha = {0.8};
  p.beta = {1.1};
  p.gamma = 0.3;
  Geometry g = Geometry::flat(1);
  CHECK(ptl::cell_parameter(p, g, 1, 1) == doctest::Approx(2.2));
  CHECK(ptl::cell_parameter(p, g, 1, 2) == doctest::Approx(1.6));
  CHECK(ptl::cell_parameter(p, g, 2, 1) == doctest::Approx(2.2));
  PolymerParams ps;
  ps.alpha = {0.9};
  ps.gamma = 0.4;
  Geometry sym = Geometry::symmetric(1);
  CHECK(ptl::cell_parameter(ps, sym, 1, 1) == doctest::Approx(1.3));
  CHECK(ptl::cell_gamma_rate(sym, 1, 1) == 0.5);
  CHECK(ptl::cell_gamma_rate(Geometry::restricted(1), 1, 1) == 1.0);

  // E[1/W] = shape / rate for the inverse-gamma cells
  ptl::Rng rng(77);
  double sum_diag = 0.0, sum_off = 0.0;
  const int m = 200000;
  for (int k = 0; k < m; ++k) {
    auto w = ptl::sample_weights(ps, sym, rng);
    sum_diag += 1.0 / w(1, 1);
    sum_off += 1.0 / w(1, 2);
    CHECK_EQ(w(1, 2), w(2, 1));
  }
  CHECK(std::abs(sum_diag / m - 1.3 / 0.5) < 0.03);
  CHECK(std::abs(sum_off / m - 1.8) < 0.02);

  PolymerParams bad = p;
  bad.alpha = {-1.0};
  CHECK_THROWS_AS(bad.validate(g), std::invalid_argument);
  CHECK_THROWS_AS(p.validate(Geometry::restricted(1)), std::invalid_argument);
}

TEST_CASE("Monte Carlo determinism and thread independence") {
  PolymerParams p;
  p.alpha = {0.8};
  p.beta = {0.8};
  p.gamma = 0.3;
  Geometry g = Geometry::flat(1);
  ptl::MCConfig cfg{50000, 42, 1};
  auto a = ptl::mc_laplace_transform(p, g, 1.0, cfg);
  auto b = ptl::mc_laplace_transform(p, g, 1.0, cfg);
  cfg.threads = 3;
  auto c = ptl::mc_laplace_transform(p, g, 1.0, cfg);
  CHECK(a.mean == b.mean);
  CHECK(a.std_error == b.std_error);
  CHECK(a.mean == c.mean);
  CHECK(a.std_error == c.std_error);
  auto tiny = ptl::mc_laplace_transform(p, g, 1e-12, cfg);
  CHECK(std::abs(tiny.mean - 1.0) < 1e-9);
  CHECK(tiny.std_error < 1e-9);
}

TEST_CASE("LPP Monte Carlo, restricted n=1") {
  PolymerParams p;
  p.alpha = {1.0};
  p.kind = WeightKind::exponential;
  ptl::MCConfig cfg{200000, 9, 1};
  auto zero = ptl::mc_lpp_cdf(p, Geometry::restricted(1), 0.0, cfg);
  CHECK(zero.mean == 0.0);
  auto est = ptl::mc_lpp_cdf(p, Geometry::restricted(1), 1.0, cfg);
  double exact = std::pow(1.0 - std::exp(-1.0), 2.0);
  CHECK(std::abs(est.mean - exact) < 4.0 * est.std_error);
  PolymerParams ig;
  ig.alpha = {1.0};
  CHECK_THROWS(ptl::mc_lpp_cdf(ig, Geometry::restricted(1), 1.0, cfg));
}
