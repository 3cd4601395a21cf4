#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ptl/cli.hpp"

namespace {

struct Run {
  int code;
  std::string out, err;
  nlohmann::json json() const { return nlohmann::json::parse(out); }
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "ptl");
  std::ostringstream out, err;
  int code = ptl::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& text) {
  std::string path = "ptl_test_" + name;
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST_CASE("grsk subcommand on the 2x2 example") {
  // w = (1,2,3,4): t11 = w12 w21/(w12+w21), t12 = w11 w12, t21 = w11 w21, t22 = w11 w22 (w12+w21)
  std::string path = write_temp("w.json", R"({"rows": [[1, 2], [3, 4]]})");
  Run r = run({"grsk", "--input", path, "--exact"});
  REQUIRE(r.code == ptl::kExitOk);
  auto j = r.json();
  CHECK(j["schema"] == "v1");
  CHECK(j["command"] == "grsk");
  CHECK(j["outputs"]["t"] == nlohmann::json::parse(R"([["6/5","2"],["3","20"]])"));
  CHECK(j["outputs"]["energy"] == "25/12");
  CHECK(j["outputs"]["energy_identity_holds"] == true);
  CHECK(j["outputs"]["tau"]["0"] == "24");

  Run f = run({"grsk", "--input", path});
  REQUIRE(f.code == ptl::kExitOk);
  CHECK(f.json()["outputs"]["t"][0][0].get<double>() == doctest::Approx(1.2).epsilon(1e-15));
  CHECK(f.json()["outputs"]["energy_identity_rel_diff"].get<double>() < 1e-12);
  std::remove(path.c_str());
}

TEST_CASE("grsk csv emits one row per cell") {
  std::string path = write_temp("wcsv.json", R"({"rows": [[1, 2], [3, 4]]})");
  Run r = run({"--csv", "grsk", "--input", path});
  REQUIRE(r.code == ptl::kExitOk);
  CHECK(r.out == "i,j,w,t\n1,1,1.0,1.2\n1,2,2.0,2.0\n2,1,3.0,3.0\n2,2,4.0,20.0\n");
  std::remove(path.c_str());
}

TEST_CASE("lpp-cdf restricted closed form") {
  Run r = run({"lpp-cdf", "--geometry", "restricted", "--alpha", "1", "--u", "1", "--route", "closed"});
  REQUIRE(r.code == ptl::kExitOk);
  double expected = std::pow(1.0 - std::exp(-1.0), 2.0);
  CHECK(std::abs(r.json()["outputs"]["value"].get<double>() - expected) < 1e-12);
  CHECK(r.json()["outputs"].contains("tolerance"));
}

TEST_CASE("verify bump-stade n=1 passes") {
  Run r = run({"verify", "--suite", "bump-stade", "--n", "1", "--alpha", "0.7", "--beta", "0.9", "--r", "1"});
  REQUIRE(r.code == ptl::kExitOk);
  auto o = r.json()["outputs"];
  CHECK(o["pass"] == true);
  CHECK(o["diff"].get<double>() < 1e-12);
}

TEST_CASE("verify reports failure with exit code 2") {
  // an impossible tolerance forces failure of a genuinely approximate identity
  Run r = run({"--tol", "1e-300", "verify", "--suite", "lpp-routes", "--geometry", "flat", "--alpha", "1",
               "--beta", "1.5", "--u", "1"});
  CHECK(r.code == ptl::kExitIdentityFailure);
  CHECK(r.json()["pass"] == false);
}

TEST_CASE("verify exact suites") {
  CHECK(run({"verify", "--suite", "sp-routes", "--mu", "2,1", "--y", "1/2,3"}).code == ptl::kExitOk);
  CHECK(run({"verify", "--suite", "baik-rains", "--y", "1/2,1/3", "--u", "2"}).code == ptl::kExitOk);
  CHECK(run({"verify", "--suite", "schur-pfaffian", "--alpha", "0.3,0.9,1.7"}).code == ptl::kExitOk);
}

TEST_CASE("usage errors exit 1") {
  CHECK(run({}).code == ptl::kExitUsage);
  CHECK(run({"frobnicate"}).code == ptl::kExitUsage);
  CHECK(run({"lpp-cdf", "--unknown-flag", "3", "--u", "1"}).code == ptl::kExitUsage);
  Run bad = run({"lpp-cdf", "--geometry", "restricted", "--alpha", "-1", "--u", "1"});
  CHECK(bad.code == ptl::kExitUsage);
  CHECK(bad.err.find("error:") != std::string::npos);
  std::string path = write_temp("bad.json", "{\"rows\": [[1, 2],");
  Run malformed = run({"grsk", "--input", path});
  CHECK(malformed.code == ptl::kExitUsage);
  CHECK(malformed.err.find("malformed JSON") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("simulate is byte-deterministic for a seed and thread count") {
  std::vector<std::string> args{"--seed", "42", "simulate", "--geometry", "half-flat", "--alpha", "1.2", "--beta",
                                "1.4", "--quantity", "laplace", "--r", "1", "--samples", "5000"};
  Run a = run(args);
  Run b = run(args);
  REQUIRE(a.code == ptl::kExitOk);
  CHECK(a.out == b.out);
  std::vector<std::string> threaded = args;
  threaded.insert(threaded.begin(), {"--threads", "3"});
  auto ja = a.json()["outputs"], jt = run(threaded).json()["outputs"];
  CHECK(ja == jt);
  CHECK(ja.contains("stderr"));
  CHECK(ja["seed"] == 42);
}

TEST_CASE("seed environment variable is overridden by --seed") {
  std::vector<std::string> args{"simulate", "--geometry", "restricted", "--alpha", "1.1", "--samples", "2000"};
  ::setenv(ptl::kSeedEnv, "7", 1);
  Run env = run(args);
  CHECK(env.json()["outputs"]["seed"] == 7);
  std::vector<std::string> explicit_seed = args;
  explicit_seed.insert(explicit_seed.begin(), {"--seed", "9"});
  CHECK(run(explicit_seed).json()["outputs"]["seed"] == 9);
  ::unsetenv(ptl::kSeedEnv);
}

TEST_CASE("laplace and whittaker subcommands") {
  Run w = run({"laplace", "--geometry", "restricted", "--alpha", "1.3", "--r", "1"});
  REQUIRE(w.code == ptl::kExitOk);
  double v = w.json()["outputs"]["value"].get<double>();
  CHECK(v > 0.0);
  CHECK(v < 1.0);
  CHECK(w.json()["outputs"].contains("est_error"));

  Run k = run({"whittaker", "--family", "gl", "--params", "0.3,-0.3", "--x", "1,2"});
  REQUIRE(k.code == ptl::kExitOk);
  // gl_2 at x = (1,2): 2 (x1 x2)^{(a1+a2)/2} K_{a1-a2}(2 sqrt(x2/x1)), a1+a2 = 0
  double expected = 2.0 * std::cyl_bessel_k(0.6, 2.0 * std::sqrt(2.0));
  CHECK(std::abs(k.json()["outputs"]["value"].get<double>() - expected) < 1e-9 * expected);
}
