#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "doctest.h"
#include "gwhf/kernel.hpp"
#include "hyperdual.hpp"
#include "oracle_constants.hpp"

using namespace gwhf;
using doctest::Approx;

namespace {

const Complex I(0, 1);

std::vector<RadialKernel> builtin_kernels() {
  std::vector<RadialKernel> ks{gef_kernel()};
  for (int r = 1; r <= 4; ++r) ks.push_back(laguerre_kernel(r));
  for (int q = 2; q <= 5; ++q) ks.push_back(laguerre_avg_kernel(q));
  return ks;
}

// Covariance of (F, F10, F01)(z) with (F, F10, F01)(w) straight from
// K(z, w) = P(|z - w|^2) exp(i (y u - x v)).
Complex first_principles(const RadialKernel& k, Complex z, Complex w, int i, int j) {
  HyperDual x{z.real(), i == 1 ? 1.0 : 0.0, 0, 0}, y{z.imag(), i == 2 ? 1.0 : 0.0, 0, 0};
  HyperDual u{w.real(), 0, j == 1 ? 1.0 : 0.0, 0}, v{w.imag(), 0, j == 2 ? 1.0 : 0.0, 0};
  HyperDual a = x - u, b = y - v, s = a * a + b * b;
  double s0 = s.a.real();
  HyperDual P = apply(s, k.p(s0), k.dp(s0), k.ddp(s0));
  HyperDual K = P * hd_exp(I * (y * u - x * v));
  return partial(K, i, j);
}

// Gaussian regression of (F10, F01) on F at the origin, for a kernel given
// as a hyper-dual function H(x, y) of the difference z - w.
template <class H>
Eigen::Matrix2cd regression_at_origin(H h) {
  Eigen::Matrix3cd g;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      HyperDual x{0, i == 1 ? 1.0 : 0.0, 0, 0}, y{0, i == 2 ? 1.0 : 0.0, 0, 0};
      HyperDual u{0, 0, j == 1 ? 1.0 : 0.0, 0}, v{0, 0, j == 2 ? 1.0 : 0.0, 0};
      HyperDual K = h(x - u, y - v) * hd_exp(I * (y * u - x * v));
      g(i, j) = partial(K, i, j);
    }
  Eigen::Vector2cd b(g(1, 0), g(2, 0));
  return g.bottomRightCorner<2, 2>() - b * b.adjoint() / g(0, 0);
}

}  // namespace

TEST_CASE("jet_from_radial") {
  auto j = jet_from_radial(gef_kernel());
  CHECK(j.b10 == 0);
  CHECK(j.b01 == 0);
  CHECK(j.h20 == Approx(-1));
  CHECK(j.h02 == Approx(-1));
  CHECK(j.h11 == 0);
  CHECK(jet_from_radial(laguerre_kernel(1)).h20 == Approx(-3));
  CHECK(jet_from_radial(laguerre_kernel(1)).h02 == Approx(-3));
  CHECK(jet_from_radial(laguerre_avg_kernel(3)).h20 == Approx(-3));
  RadialKernel bad = gef_kernel();
  bad.p = [](double t) { return 1.001 * std::exp(-t / 2); };
  CHECK_THROWS_AS(jet_from_radial(bad), InvalidKernel);
}

TEST_CASE("conditional covariance") {
  auto om = conditional_cov(jet_from_radial(gef_kernel())).omega;
  CHECK(std::abs(om(0, 0) - 1.0) < 1e-15);
  CHECK(std::abs(om(0, 1) + I) < 1e-15);
  CHECK(std::abs(om(1, 0) - I) < 1e-15);
  om = conditional_cov(jet_from_radial(laguerre_kernel(1))).omega;
  CHECK(std::abs(om(0, 0) - 3.0) < 1e-14);
  CHECK(std::abs(om(1, 1) - 3.0) < 1e-14);

  KernelJet j{0.1, 0.2, -1, -1, 0};
  CHECK(std::abs(conditional_cov(j).omega(0, 1) - (-I - 0.02)) < 1e-15);
  CHECK(std::abs(conditional_cov(j, OmegaConvention::intro).omega(0, 1) - (-I + 0.02)) < 1e-15);

  CHECK_THROWS_AS(conditional_cov(KernelJet{0, 0, 1, -1, 0}), InvalidKernel);
  CHECK_THROWS_AS(conditional_cov(KernelJet{NAN, 0, -1, -1, 0}), InvalidKernel);
}

TEST_CASE("regression on the full covariance fixes the off-diagonal sign") {
  // e^{i(b1 x + b2 y)} F for a GEF F: non-radial kernel with b10 b01 != 0
  const double b1 = 0.7, b2 = -1.3;
  auto h = [&](HyperDual a, HyperDual b) {
    return hd_exp(Complex(-0.5) * (a * a + b * b) + I * (Complex(b1) * a + Complex(b2) * b));
  };
  Eigen::Matrix2cd om = regression_at_origin(h);
  KernelJet jet{b1, b2, -1 - b1 * b1, -1 - b2 * b2, -b1 * b2};
  auto reg = conditional_cov(jet, OmegaConvention::regression).omega;
  CHECK((om - reg).norm() < 1e-14);
  CHECK((om - conditional_cov(jet, OmegaConvention::intro).omega).norm() > 1);
  // multiplying by a unimodular factor keeps the zeros: rho1 stays 1/pi
  CHECK(rho1(jet) == Approx(1 / pi).epsilon(1e-14));
  CHECK_THROWS_AS(rho1(jet, OmegaConvention::intro), InvalidKernel);
}

TEST_CASE("Delta_H and rho1") {
  CHECK(delta_h(jet_from_radial(gef_kernel())) == Approx(0).epsilon(1e-15));
  CHECK(delta_h(jet_from_radial(laguerre_kernel(1))) == Approx(8));
  CHECK(delta_h(jet_from_radial(laguerre_avg_kernel(4))) == Approx(15));
  CHECK(rho1_from_delta(0) == Approx(1 / pi));
  CHECK(rho1_from_delta(8) == Approx(5 / (3 * pi)));
  CHECK(rho1_from_delta(15) == Approx(17 / (8 * pi)));
  CHECK_THROWS_AS(rho1_from_delta(-1e-6), InvalidKernel);
  CHECK(rho1(jet_from_radial(laguerre_kernel(1))) == Approx(5 / (3 * pi)));
}

TEST_CASE("rho1_radial") {
  CHECK(rho1_radial(gef_kernel()) == Approx(1 / pi).epsilon(1e-15));
  CHECK(rho1_radial(laguerre_kernel(2)) == Approx(13 / (5 * pi)).epsilon(1e-14));
  CHECK(rho1_radial(laguerre_avg_kernel(2)) == Approx(5 / (4 * pi)).epsilon(1e-14));
  for (int q = 1; q <= 6; ++q) {
    CHECK(std::abs(rho1_radial(laguerre_kernel(q - 1)) - (q - 0.5 + 1.0 / (4 * q - 2)) / pi) < 1e-12);
    CHECK(std::abs(rho1_radial(laguerre_avg_kernel(q)) - (q + 1.0 / q) / (2 * pi)) < 1e-12);
  }
  CHECK_THROWS_AS(rho1_radial(exp_kernel(1.0 / 8)), InvalidKernel);
  for (const auto& k : builtin_kernels())
    CHECK(rho1_radial(k) == Approx(rho1(jet_from_radial(k))).epsilon(1e-14));
}

TEST_CASE("charged intensity") {
  CHECK(rho1_charged() == Approx(1 / pi));
  CHECK(rho1_charged() == Approx(rho1_from_delta(0)));
  CHECK(rho1_charged() < rho1_from_delta(8));
}

TEST_CASE("laguerre polynomials") {
  for (double t : {-1.0, 0.0, 0.3, 7.5}) {
    CHECK(laguerre(0, t) == 1);
    CHECK(laguerre(1, t) == Approx(1 - t));
    CHECK(laguerre(2, t) == Approx(1 - 2 * t + t * t / 2));
  }
  for (int q = 1; q <= 6; ++q) CHECK(laguerre_sum(q - 1, 0) == Approx(q));
  for (double t : {0.2, 3.3, 11.0}) {
    double s = 0;
    for (int k = 0; k <= 5; ++k) s += laguerre(k, t);
    CHECK(laguerre_sum(5, t) == Approx(s).epsilon(1e-13));
    // recurrence path (non-integer alpha) against the alpha -> 1 limit
    CHECK(laguerre_general(5, 1 + 1e-12, t) == Approx(laguerre_sum(5, t)).epsilon(1e-9));
    CHECK(laguerre_general(4, 0.5, t) == Approx(laguerre_general(4, 0.5 + 1e-9, t)).epsilon(1e-7));
  }
}

TEST_CASE("kernel derivatives agree with finite differences") {
  for (const auto& k : builtin_kernels()) {
    for (double s : {0.0, 0.4, 2.5, 9.0}) {
      double h = 1e-5;
      double fd1 = (k.p(s + h) - k.p(s - h)) / (2 * h);
      double fd2 = (k.dp(s + h) - k.dp(s - h)) / (2 * h);
      CHECK(k.dp(s) == Approx(fd1).epsilon(1e-7).scale(1));
      CHECK(k.ddp(s) == Approx(fd2).epsilon(1e-7).scale(1));
    }
  }
}

TEST_CASE("I(s)") {
  CHECK(i_function(gef_kernel(), 0) == Approx(1));
  CHECK(i_function(laguerre_kernel(1), 0) == Approx(5.0 / 3));
  CHECK(i_function(gef_kernel(), 1e-9) == Approx(1).epsilon(1e-6));
  for (const auto& k : builtin_kernels()) {
    CHECK(std::abs(i_function(k, 400)) < 1e-12);
    // (1/pi) I(0) is the first intensity
    CHECK(i_function(k, 0) / pi == Approx(rho1_radial(k)).epsilon(1e-14));
  }
  RadialKernel periodic{"cos", [](double t) { return std::cos(pi * t / 2); },
                        [](double t) { return -pi / 2 * std::sin(pi * t / 2); },
                        [](double t) { return -pi * pi / 4 * std::cos(pi * t / 2); }};
  CHECK_THROWS_AS(i_function(periodic, 2), SingularKernel);
  CHECK_THROWS_AS(i_function(gef_kernel(), -1), DomainError);
}

TEST_CASE("tau2 and I'") {
  auto g = gef_kernel();
  CHECK(tau2_charged(g, 30) == Approx(1 / (pi * pi)).epsilon(1e-12));
  double h = 1e-5;
  double fd = (i_function(g, 1 + h) - i_function(g, 1 - h)) / (2 * h);
  CHECK(std::abs(i_prime(g, 1) - fd) < 1e-6);
  for (const auto& k : builtin_kernels())
    for (double s : {0.01, 0.7, 3.0, 12.0}) {
      double d = (i_function(k, s + h) - i_function(k, s - h)) / (2 * h);
      CHECK(std::abs(i_prime(k, s) - d) < 1e-6 * std::max(1.0, std::abs(d)));
    }
  double P = g.p(1);
  CHECK(std::abs(wick_oracle_E(g, 0, 1) / (1 - P * P) - 1 - i_prime(g, 1)) < 1e-9);
  CHECK_THROWS_AS(tau2_charged(g, 0), DomainError);
}

TEST_CASE("joint covariance matches first-principles derivatives") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-2, 2);
  for (const auto& k : builtin_kernels()) {
    for (int trial = 0; trial < 4; ++trial) {
      Complex z(U(rng), U(rng)), w(U(rng), U(rng));
      auto m = joint_covariance(k, z, w);
      double worst = 0;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          worst = std::max(worst, std::abs(m(i, 3 + j) - first_principles(k, z, w, i, j)));
          worst = std::max(worst, std::abs(m(i, j) - first_principles(k, z, z, i, j)));
          worst = std::max(worst, std::abs(m(3 + i, 3 + j) - first_principles(k, w, w, i, j)));
        }
      CHECK(worst < 1e-12);
      CHECK((m - m.adjoint()).norm() < 1e-13);
    }
  }
}

TEST_CASE("Wick oracle equals 1 + I' on 40 separations") {
  for (const auto& k : {gef_kernel(), laguerre_kernel(1), laguerre_kernel(2)}) {
    double worst = 0;
    for (int i = 0; i < 40; ++i) {
      double d = 0.05 + (8 - 0.05) * i / 39.0;
      double P = k.p(d * d);
      worst = std::max(worst, std::abs(wick_oracle_E(k, 0, d) / (1 - P * P) - 1 - i_prime(k, d * d)));
    }
    CHECK(worst < 1e-8);
  }
}

TEST_CASE("Wick oracle symmetries") {
  auto k = laguerre_kernel(2);
  Complex z(0.3, -0.8), w(1.1, 0.4), zeta(-2.7, 1.9);
  double e = wick_oracle_E(k, z, w);
  CHECK(wick_oracle_E(k, z + zeta, w + zeta) == Approx(e).epsilon(1e-10));
  Complex d = w - z;
  CHECK(wick_oracle_E(k, 0, std::abs(d)) == Approx(e).epsilon(1e-10));
  CHECK(wick_oracle_E(k, 0, Complex(0, std::abs(d))) == Approx(e).epsilon(1e-10));
  CHECK_THROWS_AS(wick_oracle_E(k, z, z), DegeneratePair);
}

TEST_CASE("variance asymptote against the frozen oracle") {
  CHECK(perimeter_integral(gef_kernel()) == Approx(oracle::perimeter_gef).epsilon(1e-9));
  CHECK(perimeter_integral(laguerre_kernel(1)) == Approx(oracle::perimeter_laguerre1).epsilon(1e-9));
  CHECK(perimeter_integral(laguerre_kernel(2)) == Approx(oracle::perimeter_laguerre2).epsilon(1e-9));
  CHECK(perimeter_integral(laguerre_avg_kernel(2)) == Approx(oracle::perimeter_avg2).epsilon(1e-9));
  CHECK(variance_asymptote(gef_kernel()) == Approx(oracle::asymptote_gef).epsilon(1e-9));
  CHECK(variance_asymptote(laguerre_kernel(1)) == Approx(oracle::asymptote_laguerre1).epsilon(1e-9));
  // closed form for the GEF
  CHECK(variance_asymptote(gef_kernel()) == Approx(2.6123753486854883 / (4 * std::sqrt(pi))).epsilon(1e-9));
  CHECK_THROWS_AS(variance_asymptote(rational_kernel(1, 1)), DecayViolation);
}

TEST_CASE("exact disk variance") {
  CHECK(charge_variance(gef_kernel(), 3) == Approx(oracle::var_gef_R3).epsilon(1e-9));
  CHECK(charge_variance(gef_kernel(), 6) == Approx(oracle::var_gef_R6).epsilon(1e-9));
  CHECK(charge_variance(laguerre_kernel(1), 3) == Approx(oracle::var_laguerre1_R3).epsilon(1e-9));
  CHECK(charge_variance(laguerre_kernel(1), 6) == Approx(oracle::var_laguerre1_R6).epsilon(1e-9));
  // small disks: Var ~ rho1 pi R^2 (at most one zero)
  auto k = laguerre_kernel(1);
  double R = 0.02;
  CHECK(charge_variance(k, R) == Approx(rho1_radial(k) * pi * R * R).epsilon(1e-2));
  // slope approaches the asymptote
  double slope = charge_variance(gef_kernel(), 40) - charge_variance(gef_kernel(), 39);
  CHECK(slope == Approx(oracle::asymptote_gef).epsilon(2e-3));
  CHECK_THROWS_AS(charge_variance(k, 0), DomainError);
}

TEST_CASE("integral identity for every built-in kernel") {
  for (const auto& k : builtin_kernels()) {
    INFO(k.name);
    CHECK(std::abs(tau2_deficit_integral(k) - rho1_radial(k)) < 1e-6);
  }
}

TEST_CASE("kernel validation") {
  CHECK(validate_kernel(gef_kernel()).ok());
  for (const auto& k : builtin_kernels()) CHECK(validate_kernel(k).ok());
  auto slow = validate_kernel(exp_kernel(1.0 / 8));
  CHECK(slow.has("P'(0)<=-1/2"));
  CHECK_FALSE(slow.has("|P|<1"));
  RadialKernel damped{"cos-damped", [](double t) { return std::cos(t) * std::exp(-t / 2); },
                      [](double t) { return (-std::sin(t) - std::cos(t) / 2) * std::exp(-t / 2); },
                      [](double t) { return (std::sin(t) - 0.75 * std::cos(t)) * std::exp(-t / 2); }};
  CHECK_FALSE(validate_kernel(damped).has("|P|<1"));
  RadialKernel periodic{"cos", [](double t) { return std::cos(pi * t); },
                        [](double t) { return -pi * std::sin(pi * t); },
                        [](double t) { return -pi * pi * std::cos(pi * t); }};
  auto rep = validate_kernel(periodic);
  REQUIRE(rep.has("|P|<1"));
  for (const auto& v : rep.violations)
    if (v.predicate == "|P|<1") CHECK(v.at == 1.0);
  CHECK(validate_kernel(rational_kernel(1, 1)).has("decay"));
  CHECK_FALSE(validate_kernel(rational_kernel(1, 3)).has("decay"));

  CHECK(validate_kernel(KernelJet{0, 0, -1, -1, 0}).ok());
  CHECK(validate_kernel(KernelJet{0, 0, 0.5, -1, 0}).has("Omega11>=0"));
  CHECK(validate_kernel(KernelJet{0, 0, -1, -1, 0.5}).has("Delta_H>=0"));
  CHECK(validate_kernel(KernelJet{INFINITY, 0, -1, -1, 0}).has("finite"));
}
