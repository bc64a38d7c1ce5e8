#include <cstdio>
#include <fstream>

#include "doctest.h"
#include "gwhf/specs.hpp"
#include "gwhf/window.hpp"

using namespace gwhf;
using doctest::Approx;

TEST_CASE("kernel arguments") {
  auto k = parse_kernel_arg("gef");
  CHECK(k.family == "gef");
  REQUIRE(k.radial);
  CHECK(rho1_radial(*k.radial) == Approx(1 / pi));
  k = parse_kernel_arg("laguerre:2");
  CHECK(k.order == 2);
  CHECK(k.jet.h20 == Approx(-5));
  k = parse_kernel_arg("laguerre-avg:3");
  CHECK(k.order == 3);
  CHECK(rho1_radial(*k.radial) == Approx(rho1_radial(laguerre_avg_kernel(3))));
  k = parse_kernel_arg(R"({"family": "laguerre", "q": 2})");
  CHECK(k.order == 1);
  k = parse_kernel_arg(R"({"family": "custom", "jet": [0, 0, -1, -1, 0]})");
  CHECK_FALSE(k.radial);
  CHECK(rho1(k.jet) == Approx(1 / pi));
  k = parse_kernel_arg("exp:0.75");
  CHECK(k.jet.h20 == Approx(-1.5));
  k = parse_kernel_arg("rational:1,3");
  REQUIRE(k.radial);
  CHECK_THROWS_AS(parse_kernel_arg("bessel"), ConfigError);
  CHECK_THROWS_AS(parse_kernel_arg(R"({"family": "nope"})"), ConfigError);
  CHECK_THROWS_AS(parse_kernel_arg("laguerre:x"), ConfigError);
}

TEST_CASE("kernel from a file") {
  std::string path = "test_specs_kernel.json";
  {
    std::ofstream out(path);
    out << R"({"kernel": {"family": "laguerre", "r": 1}})";
  }
  auto k = parse_kernel_arg(path);
  std::remove(path.c_str());
  CHECK(k.family == "laguerre");
  CHECK(k.order == 1);
}

TEST_CASE("window arguments") {
  auto g = parse_window_arg("hermite:1");
  CHECK(g.hermite_index == 1);
  CHECK(rho1_stft(g) == Approx(5.0 / 3).epsilon(1e-9));
  g = parse_window_arg("gaussian:1.5,0,0.2,0.1,0.3");
  CHECK(rho1_stft(g) == Approx(1).epsilon(1e-8));
  g = parse_window_arg("mixture:1,0;0,0;1,0");
  CHECK(rho1_stft(g) == Approx(rho1_stft(hermite_mixture({1, 0, 1}))));
  g = parse_window_arg(R"({"family": "hermite-mixture", "coeffs": [1, [0, 1]]})");
  CHECK(rho1_stft(g) >= 1);
  g = parse_window_arg(R"({"family": "transformed", "base": {"family": "hermite", "r": 1}, "x0": 0.5, "xi0": 1.2, "xi1": -1})");
  CHECK(rho1_stft(g) == Approx(5.0 / 3).epsilon(1e-7));
  g = parse_window_arg(R"({"family": "generalized-gaussian", "params": [1, 0, 0, 0, 0]})");
  CHECK(std::abs(g(0.3) - hermite(0)(0.3)) < 1e-14);
  CHECK_THROWS_AS(parse_window_arg("hermite:-2"), InvalidWindow);
  CHECK_THROWS_AS(parse_window_arg("kaiser:3"), ConfigError);
  CHECK_THROWS_AS(parse_window_arg(R"({"family": "gaussian"})"), ConfigError);
}

TEST_CASE("sampled window argument") {
  std::string path = "test_specs_samples.txt";
  double dt = 1.0 / 128;
  {
    std::ofstream out(path);
    out.precision(17);
    auto h = hermite(0);
    for (int k = -512; k <= 512; ++k) out << h(k * dt).real() << " 0\n";
  }
  auto g = parse_window_arg("samples:" + path + "," + std::to_string(dt));
  std::remove(path.c_str());
  CHECK(rho1_stft(g) == Approx(1).epsilon(1e-6));
}

TEST_CASE("json loading") {
  CHECK(load_json_arg(R"({"a": 1})")["a"] == 1);
  CHECK_THROWS_AS(load_json_arg("/nonexistent/file.json"), ConfigError);
}
