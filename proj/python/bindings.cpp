#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "ptl/array_json.hpp"
#include "ptl/cli.hpp"
#include "ptl/grsk.hpp"
#include "ptl/laws.hpp"
#include "ptl/lpp_laws.hpp"
#include "ptl/polymer.hpp"
#include "ptl/rational.hpp"
#include "ptl/schur.hpp"
#include "ptl/specfun.hpp"
#include "ptl/whittaker.hpp"

namespace py = pybind11;

namespace {

using Rows = std::vector<std::vector<double>>;

ptl::PolygonalArray<double> to_array(const Rows& rows) {
  return ptl::array_from_json(nlohmann::json{{"rows", rows}});
}

Rows to_rows(const ptl::PolygonalArray<double>& a) {
  return ptl::array_to_json(a)["rows"].get<Rows>();
}

std::vector<std::vector<std::string>> exact_grsk(const std::vector<std::vector<std::string>>& rows) {
  nlohmann::json j{{"rows", rows}};
  auto t = ptl::array_to_json(ptl::grsk(ptl::rational_array_from_json(j)));
  return t["rows"].get<std::vector<std::vector<std::string>>>();
}

ptl::LaplaceQuery make_query(const std::string& geometry, std::vector<double> alpha, std::vector<double> beta,
                             double gamma, double r) {
  ptl::PolymerParams p;
  p.alpha = std::move(alpha);
  p.beta = std::move(beta);
  p.gamma = gamma;
  auto tag = ptl::geometry_tag_from_string(geometry);
  return {ptl::Geometry::from_tag(tag, static_cast<int>(p.alpha.size())), p, r};
}

ptl::QuadratureSpec quad(int nodes) {
  ptl::QuadratureSpec q;
  q.nodes = nodes;
  q.validate();
  return q;
}

std::vector<ptl::Rational> parse_all(const std::vector<std::string>& ys) {
  std::vector<ptl::Rational> out;
  for (const auto& s : ys) out.push_back(ptl::parse_rational(s));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Geometric RSK, Whittaker functions, log-gamma polymers and LPP laws";

  m.def("grsk", [](const Rows& rows) { return to_rows(ptl::grsk(to_array(rows))); }, py::arg("rows"));
  m.def("grsk_exact", &exact_grsk, py::arg("rows"), "gRSK over exact rationals; entries are strings like '3/4'");
  m.def("energy", [](const Rows& rows) { return ptl::energy(to_array(rows)); }, py::arg("rows"));

  m.def("log_gamma", &ptl::log_gamma, py::arg("z"));
  m.def("bessel_k", &ptl::bessel_k, py::arg("nu"), py::arg("x"));

  m.def(
      "whittaker_gl",
      [](const std::vector<ptl::cplx>& alpha, const std::vector<double>& x, int nodes) {
        return ptl::whittaker_gl(alpha, x, quad(nodes));
      },
      py::arg("alpha"), py::arg("x"), py::arg("nodes") = ptl::QuadratureSpec{}.nodes);
  m.def(
      "whittaker_so",
      [](const std::vector<ptl::cplx>& beta, const std::vector<double>& x, int nodes) {
        return ptl::whittaker_so(beta, x, quad(nodes));
      },
      py::arg("beta"), py::arg("x"), py::arg("nodes") = ptl::QuadratureSpec{}.nodes);

  m.def(
      "laplace_whittaker",
      [](const std::string& g, std::vector<double> a, std::vector<double> b, double gamma, double r) {
        return ptl::laplace_whittaker(make_query(g, std::move(a), std::move(b), gamma, r));
      },
      py::arg("geometry"), py::arg("alpha"), py::arg("beta") = std::vector<double>{}, py::arg("gamma") = 0.0,
      py::arg("r") = 1.0);
  m.def(
      "laplace_contour",
      [](const std::string& g, std::vector<double> a, std::vector<double> b, double gamma, double r) {
        return ptl::laplace_contour(make_query(g, std::move(a), std::move(b), gamma, r)).value;
      },
      py::arg("geometry"), py::arg("alpha"), py::arg("beta") = std::vector<double>{}, py::arg("gamma") = 0.0,
      py::arg("r") = 1.0);
  m.def(
      "laplace_mc",
      [](const std::string& g, std::vector<double> a, std::vector<double> b, double gamma, double r,
         std::uint64_t samples, std::uint64_t seed) {
        auto q = make_query(g, std::move(a), std::move(b), gamma, r);
        auto e = ptl::mc_laplace_transform(q.params, q.geometry, r, {samples, seed, 1});
        return std::make_tuple(e.mean, e.std_error);
      },
      py::arg("geometry"), py::arg("alpha"), py::arg("beta") = std::vector<double>{}, py::arg("gamma") = 0.0,
      py::arg("r") = 1.0, py::arg("samples") = 100000, py::arg("seed") = 1,
      "Monte Carlo estimate of E exp(-rZ); returns (mean, stderr)");

  m.def(
      "lpp_cdf",
      [](const std::string& g, const std::vector<double>& a, const std::vector<double>& b, double u) {
        return ptl::lpp_cdf(ptl::geometry_tag_from_string(g), a, b, u);
      },
      py::arg("geometry"), py::arg("alpha"), py::arg("beta") = std::vector<double>{}, py::arg("u"));
  m.def(
      "baik_rains_cdf",
      [](const std::vector<std::string>& y, int u) { return ptl::baik_rains_cdf(parse_all(y), u).get_str(); },
      py::arg("y"), py::arg("u"));

  m.def(
      "sp_poly",
      [](const std::vector<int>& mu, const std::vector<std::string>& y, const std::string& route) {
        auto r = route == "gt" ? ptl::SpRoute::gt : ptl::SpRoute::weyl;
        return ptl::sp_poly<ptl::Rational>(mu, parse_all(y), r).get_str();
      },
      py::arg("mu"), py::arg("y"), py::arg("route") = "weyl");
  m.def(
      "sp_cont", [](const std::vector<double>& a, const std::vector<double>& x) { return ptl::sp_cont(a, x); },
      py::arg("alpha"), py::arg("x"));
  m.def(
      "schur_pfaffian", [](const std::vector<double>& a) { return ptl::schur_pfaffian(a); }, py::arg("alpha"));
  m.def(
      "schur_pfaffian_product", [](const std::vector<double>& a) { return ptl::schur_pfaffian_product(a); },
      py::arg("alpha"));

  m.def(
      "run_cli",
      [](std::vector<std::string> args) {
        args.insert(args.begin(), "ptl");
        std::ostringstream out, err;
        int code = ptl::run_cli(args, out, err);
        return std::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Run one CLI command in-process; returns (exit_code, stdout, stderr)");
}
