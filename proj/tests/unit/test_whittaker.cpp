#include <doctest.h>

#include <cmath>
#include <random>

#include "ptl/whittaker.hpp"

using ptl::cplx;
using ptl::QuadratureSpec;

namespace {

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

double gl2_bessel(double a1, double a2, double x1, double x2) {
  return 2.0 * std::pow(x1 * x2, (a1 + a2) / 2.0) * ptl::bessel_k(a1 - a2, 2.0 * std::sqrt(x2 / x1));
}

}  // namespace

TEST_CASE("pattern statistics") {
  ptl::TriangularPattern tri{{{1.7}, {2.0, 0.6}}};
  auto st = ptl::pattern_statistics(tri);
  CHECK(st.type[0] == doctest::Approx(1.7));
  CHECK(st.type[1] == doctest::Approx(2.0 * 0.6 / 1.7));
  CHECK(st.energy == doctest::Approx(0.6 / 1.7 + 1.7 / 2.0));

  ptl::HalfTriangularPattern half{{{1.3}, {0.8}}};
  auto sh = ptl::pattern_statistics(half);
  CHECK(sh.energy == doctest::Approx(1.0 / 1.3 + 1.3 / 0.8));
  CHECK(sh.type[1] == doctest::Approx(0.8 / 1.3));

  ptl::TriangularPattern ones{{{1.0}, {1.0, 1.0}, {1.0, 1.0, 1.0}}};
  auto so = ptl::pattern_statistics(ones);
  CHECK(so.type == std::vector<double>{1.0, 1.0, 1.0});
  CHECK(so.energy == 6.0);

  ptl::TriangularPattern bad{{{1.0}, {1.0}}};
  CHECK_THROWS_AS(ptl::pattern_statistics(bad), std::invalid_argument);
}

TEST_CASE("gl_1 and gl_2 closed forms") {
  std::vector<cplx> a1{0.7};
  std::vector<double> x1{2.5};
  CHECK(rel(ptl::whittaker_gl(a1, x1), std::pow(2.5, 0.7)) < 1e-15);

  const double grid[] = {0.2, 0.5, 1.0, 2.0, 5.0};
  for (auto [p, q] : {std::pair{0.3, -0.4}, std::pair{1.2, 0.5}}) {
    ptl::GlWhittaker psi({p, q});
    for (double x1v : grid) {
      for (double x2v : grid) {
        std::vector<double> x{x1v, x2v};
        CHECK(rel(psi(x), gl2_bessel(p, q, x1v, x2v)) < 1e-8);
      }
    }
  }
}

TEST_CASE("gl translation and permutation invariance") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(-0.8, 0.8), lx(-1.0, 1.0);
  for (int n = 2; n <= 3; ++n) {
    std::vector<cplx> alpha(static_cast<std::size_t>(n));
    std::vector<double> x(static_cast<std::size_t>(n));
    for (auto& a : alpha) a = u(gen);
    for (auto& v : x) v = std::exp(lx(gen));
    double prod = 1.0;
    for (double v : x) prod *= v;
    cplx base = ptl::whittaker_gl(alpha, x);
    for (double c : {-1.0, 0.5, 2.0}) {
      std::vector<cplx> shifted = alpha;
      for (auto& a : shifted) a += c;
      CHECK(rel(ptl::whittaker_gl(shifted, x), std::pow(prod, c) * base) < 1e-8);
    }
    std::vector<cplx> rotated(alpha.begin() + 1, alpha.end());
    rotated.push_back(alpha[0]);
    CHECK(rel(ptl::whittaker_gl(rotated, x), base) < 1e-6);
  }
}

TEST_CASE("so Whittaker functions") {
  std::vector<cplx> empty;
  std::vector<double> none;
  CHECK(ptl::whittaker_so(empty, none) == cplx(1.0));
  for (double beta : {0.0, 0.3, -1.1}) {
    for (double x : {0.1, 1.0, 7.0}) {
      std::vector<cplx> b{beta};
      std::vector<double> xv{x};
      CHECK(rel(ptl::whittaker_so(b, xv), 2.0 * ptl::bessel_k(2.0 * beta, 2.0 / std::sqrt(x))) < 1e-10);
    }
  }
  std::vector<double> x{1.3, 0.6};
  std::vector<cplx> b{0.3, 0.7};
  cplx base = ptl::whittaker_so(b, x);
  std::vector<std::vector<cplx>> images{{-0.7, 0.3}, {0.7, 0.3}, {-0.3, -0.7}, {0.3, -0.7}};
  for (const auto& img : images) CHECK(rel(ptl::whittaker_so(img, x), base) < 1e-6);
}

TEST_CASE("number-theory parametrization") {
  std::vector<double> one{1.0};
  CHECK(ptl::nt_convert(one)[0] == doctest::Approx(1.0 / ptl::kPi));
  std::vector<double> y{0.4};
  std::vector<double> b{0.6};
  CHECK(rel(ptl::nt_whittaker(ptl::NtKind::B, b, y), 2.0 * ptl::bessel_k(0.6, 2.0 * ptl::kPi * 0.4)) < 1e-14);

  // A kind against pi-scaled gl with a_i = 2 alpha_{n-i+1}, at n = 2 and 3
  for (std::vector<double> alpha : {std::vector<double>{0.4, -0.3}, std::vector<double>{0.2, 0.5, -0.3}}) {
    const std::size_t n = alpha.size();
    std::vector<double> x = n == 2 ? std::vector<double>{0.7, 1.9} : std::vector<double>{2.0, 1.0, 0.4};
    std::vector<double> a(n);
    double abs_alpha = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = 2.0 * alpha[n - 1 - i];
      abs_alpha += alpha[i];
    }
    std::vector<cplx> neg(n);
    for (std::size_t i = 0; i < n; ++i) neg[i] = -alpha[i];
    cplx lhs = ptl::nt_whittaker(ptl::NtKind::A, a, ptl::nt_convert(x));
    cplx rhs = std::pow(ptl::kPi, -(static_cast<double>(n) + 1.0) * abs_alpha) * ptl::whittaker_gl(neg, x);
    CHECK(rel(lhs, rhs) < 1e-8);
  }
  // B kind at n = 2 against the so_5 recursion
  std::vector<double> x{1.3, 0.6}, bb{0.6, 1.4};
  std::vector<cplx> beta{0.3, 0.7};
  CHECK(rel(ptl::nt_whittaker(ptl::NtKind::B, bb, ptl::nt_convert(x)), ptl::whittaker_so(beta, x)) < 1e-8);
}

TEST_CASE("pattern Monte Carlo oracle") {
  std::vector<double> a{0.0, 0.0}, x{1.0, 1.0};
  auto e = ptl::whittaker_gl_oracle(a, x, 100000, 11);
  CHECK(std::abs(e.mean - 2.0 * ptl::bessel_k(0.0, 2.0)) < 3.0 * e.std_error);

  std::vector<double> b{0.3}, x1{1.0};
  auto s = ptl::whittaker_so_oracle(b, x1, 100000, 12);
  CHECK(std::abs(s.mean - 2.0 * ptl::bessel_k(0.6, 2.0)) < 3.0 * s.std_error);

  std::vector<double> a3{0.2, 0.5, -0.3}, x3{2.0, 1.0, 0.4};
  std::vector<cplx> a3c(a3.begin(), a3.end());
  auto g3 = ptl::whittaker_gl_oracle(a3, x3, 200000, 13);
  CHECK(std::abs(g3.mean - ptl::whittaker_gl(a3c, x3).real()) < 3.0 * g3.std_error);

  std::vector<double> b2{0.3, 0.7}, x2{1.3, 0.6};
  std::vector<cplx> b2c(b2.begin(), b2.end());
  auto s5 = ptl::whittaker_so_oracle(b2, x2, 200000, 14);
  CHECK(std::abs(s5.mean - ptl::whittaker_so(b2c, x2).real()) < 3.0 * s5.std_error);

  auto again = ptl::whittaker_so_oracle(b2, x2, 200000, 14);
  CHECK(again.mean == s5.mean);
}

TEST_CASE("whittaker errors and error estimate") {
  std::vector<cplx> a4{0.1, 0.2, 0.3, 0.4};
  std::vector<double> x4{1, 1, 1, 1};
  CHECK_THROWS_AS(ptl::whittaker_gl(a4, x4), std::invalid_argument);
  QuadratureSpec wide;
  wide.gl_cap = 4;
  wide.nodes = 2;
  CHECK(std::isfinite(ptl::whittaker_gl(a4, x4, wide).real()));
  std::vector<cplx> b3{0.1, 0.2, 0.3};
  std::vector<double> x3{1, 1, 1};
  CHECK_THROWS_AS(ptl::whittaker_so(b3, x3), std::invalid_argument);
  std::vector<cplx> a2{0.1, 0.2};
  std::vector<double> bad{1.0, -1.0};
  CHECK_THROWS_AS(ptl::whittaker_gl(a2, bad), std::invalid_argument);

  std::vector<double> x2{0.5, 2.0};
  auto v = ptl::whittaker_with_error(ptl::WhittakerFamily::gl, a2, x2);
  CHECK(v.est_error < 1e-8 * std::abs(v.value));
  CHECK(rel(v.value, gl2_bessel(0.1, 0.2, 0.5, 2.0)) < 1e-10);
}
