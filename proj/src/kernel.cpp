#include "gwhf/kernel.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/special_functions/laguerre.hpp>
#include <cmath>
#include <sstream>

#include "gwhf/quadrature.hpp"

namespace gwhf {

namespace {

constexpr double kPsdTol = 1e-9;
constexpr double kSingular = 1e-14;
// below this s the closed form for I' loses digits to 1 - P^2 cancellation
constexpr double kSmallS = 1e-5;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

double one_minus_p2(double P) { return (1 - P) * (1 + P); }

// profile L(t) e^{-t/2} with L, L', L'' supplied
RadialKernel laguerre_profile(std::string name, std::function<double(double)> L,
                              std::function<double(double)> dL,
                              std::function<double(double)> ddL) {
  RadialKernel k;
  k.name = std::move(name);
  k.p = [L](double t) { return L(t) * std::exp(-t / 2); };
  k.dp = [L, dL](double t) { return (dL(t) - L(t) / 2) * std::exp(-t / 2); };
  k.ddp = [L, dL, ddL](double t) {
    return (ddL(t) - dL(t) + L(t) / 4) * std::exp(-t / 2);
  };
  return k;
}

void require_finite(const KernelJet& j) {
  if (!std::isfinite(j.b10) || !std::isfinite(j.b01) || !std::isfinite(j.h20) ||
      !std::isfinite(j.h02) || !std::isfinite(j.h11))
    throw InvalidKernel("kernel jet has non-finite entries");
}

// (|P| + |P'| + |P''|)(s) * s^2, the quantity that must stay bounded
double decay_quantity(const RadialKernel& p, double s) {
  return (std::abs(p.p(s)) + std::abs(p.dp(s)) + std::abs(p.ddp(s))) * s * s;
}

constexpr double kGridEnd = 256.0;

bool decay_violated(const RadialKernel& p) {
  double q_end = decay_quantity(p, kGridEnd);
  double q_half = decay_quantity(p, kGridEnd / 2);
  return !std::isfinite(q_end) || (q_end > 1e-8 && q_end >= q_half);
}

double i_prime_regular(const RadialKernel& p, double s) {
  return i_prime(p, std::max(s, kSmallS));
}

}  // namespace

const char* to_string(OmegaConvention c) {
  return c == OmegaConvention::regression ? "regression" : "intro";
}

OmegaConvention parse_convention(const std::string& s) {
  if (s == "regression") return OmegaConvention::regression;
  if (s == "intro") return OmegaConvention::intro;
  throw ConfigError("unknown convention '" + s + "' (expected regression|intro)");
}

double laguerre(int n, double t) {
  if (n < 0) return 0;
  return boost::math::laguerre(static_cast<unsigned>(n), t);
}

double laguerre_general(int n, double alpha, double t) {
  if (n < 0) return 0;
  if (alpha == std::floor(alpha) && alpha >= 0)
    return boost::math::laguerre(static_cast<unsigned>(n), static_cast<unsigned>(alpha), t);
  // three-term recurrence for non-integer alpha
  double l0 = 1, l1 = 1 + alpha - t;
  if (n == 0) return l0;
  for (int k = 1; k < n; ++k) {
    double l2 = ((2 * k + 1 + alpha - t) * l1 - (k + alpha) * l0) / (k + 1);
    l0 = l1;
    l1 = l2;
  }
  return l1;
}

double laguerre_sum(int n, double t) { return laguerre_general(n, 1, t); }

RadialKernel gef_kernel() {
  RadialKernel k;
  k.name = "gef";
  k.p = [](double t) { return std::exp(-t / 2); };
  k.dp = [](double t) { return -0.5 * std::exp(-t / 2); };
  k.ddp = [](double t) { return 0.25 * std::exp(-t / 2); };
  return k;
}

RadialKernel laguerre_kernel(int r) {
  if (r < 0) throw InvalidKernel("laguerre kernel needs r >= 0");
  return laguerre_profile(
      "laguerre:" + std::to_string(r), [r](double t) { return laguerre(r, t); },
      [r](double t) { return -laguerre_general(r - 1, 1, t); },
      [r](double t) { return laguerre_general(r - 2, 2, t); });
}

RadialKernel laguerre_avg_kernel(int q) {
  if (q < 1) throw InvalidKernel("laguerre-avg kernel needs q >= 1");
  double inv = 1.0 / q;
  return laguerre_profile(
      "laguerre-avg:" + std::to_string(q), [=](double t) { return inv * laguerre_general(q - 1, 1, t); },
      [=](double t) { return -inv * laguerre_general(q - 2, 2, t); },
      [=](double t) { return inv * laguerre_general(q - 3, 3, t); });
}

RadialKernel exp_kernel(double a) {
  RadialKernel k;
  k.name = "exp:" + fmt(a);
  k.p = [a](double t) { return std::exp(-a * t); };
  k.dp = [a](double t) { return -a * std::exp(-a * t); };
  k.ddp = [a](double t) { return a * a * std::exp(-a * t); };
  return k;
}

RadialKernel rational_kernel(double a, int n) {
  if (n < 1) throw InvalidKernel("rational kernel needs n >= 1");
  RadialKernel k;
  k.name = "rational:" + fmt(a) + "," + std::to_string(n);
  double c = a / n;
  k.p = [=](double t) { return std::pow(1 + c * t, -n); };
  k.dp = [=](double t) { return -n * c * std::pow(1 + c * t, -n - 1); };
  k.ddp = [=](double t) { return n * (n + 1.0) * c * c * std::pow(1 + c * t, -n - 2); };
  return k;
}

KernelJet jet_from_radial(const RadialKernel& p) {
  double p0 = p.p(0);
  if (!(std::abs(p0 - 1) <= 1e-12))
    throw InvalidKernel(p.name + ": P(0) = " + fmt(p0) + ", expected 1");
  double d0 = p.dp(0);
  return {0, 0, 2 * d0, 2 * d0, 0};
}

ConditionalCov2 conditional_cov(const KernelJet& j, OmegaConvention conv) {
  require_finite(j);
  const Complex I(0, 1);
  double prod = j.b10 * j.b01;
  double sign = conv == OmegaConvention::regression ? -1.0 : 1.0;
  ConditionalCov2 c;
  c.omega(0, 0) = -j.h20 - j.b10 * j.b10;
  c.omega(1, 1) = -j.h02 - j.b01 * j.b01;
  c.omega(0, 1) = -j.h11 - I + sign * prod;
  c.omega(1, 0) = std::conj(c.omega(0, 1));
  if (c.omega(0, 0).real() < -kPsdTol || c.omega(1, 1).real() < -kPsdTol)
    throw InvalidKernel("conditional covariance has a negative diagonal entry (" +
                        fmt(c.omega(0, 0).real()) + ", " + fmt(c.omega(1, 1).real()) + ")");
  return c;
}

double delta_h(const KernelJet& jet, OmegaConvention conv) {
  double d = conditional_cov(jet, conv).det();
  if (d < -kPsdTol) throw InvalidKernel("Delta_H = " + fmt(d) + " < 0");
  return std::max(d, 0.0);
}

double rho1_from_delta(double delta) {
  if (delta < -kPsdTol) throw InvalidKernel("Delta_H = " + fmt(delta) + " < 0");
  delta = std::max(delta, 0.0);
  return (delta + 2) / (2 * pi * std::sqrt(delta + 1));
}

double rho1(const KernelJet& jet, OmegaConvention conv) {
  return rho1_from_delta(delta_h(jet, conv));
}

double rho1_radial(const RadialKernel& p) {
  double d0 = p.dp(0);
  if (!(d0 <= -0.5 + 1e-12))
    throw InvalidKernel(p.name + ": P'(0) = " + fmt(d0) + " > -1/2");
  return -(d0 + 1 / (4 * d0)) / pi;
}

double rho1_charged() { return 1 / pi; }

double i_function(const RadialKernel& p, double s) {
  if (s < 0) throw DomainError("i_function needs s >= 0");
  if (s == 0) {
    double d0 = p.dp(0);
    return -d0 - 1 / (4 * d0);
  }
  double P = p.p(s), D = p.dp(s);
  double den = one_minus_p2(P);
  if (std::abs(den) < kSingular)
    throw SingularKernel(p.name + ": 1 - P(s)^2 vanishes at s = " + fmt(s));
  return s * (2 * D * D + 1.5 * P * P) / den + 2 * s * s * P * D / (den * den);
}

double i_prime(const RadialKernel& p, double s) {
  if (!(s > 0)) throw DomainError("i_prime needs s > 0");
  double P = p.p(s), D = p.dp(s), DD = p.ddp(s);
  double den = one_minus_p2(P);
  if (std::abs(den) < kSingular)
    throw SingularKernel(p.name + ": 1 - P(s)^2 vanishes at s = " + fmt(s));
  double t1 = 2 * s * s * (3 * P * P * D * D + D * D + P * DD * den) / (den * den * den);
  double t2 = s * D * (7 * P + 4 * P * D * D + 4 * DD * den) / (den * den);
  double t3 = (2 * D * D + 1.5 * P * P) / den;
  return t1 + t2 + t3;
}

double tau2_charged(const RadialKernel& p, double d) {
  if (!(d > 0)) throw DomainError("tau2_charged needs d > 0");
  return (1 + i_prime(p, d * d)) / (pi * pi);
}

Eigen::Matrix<Complex, 6, 6> joint_covariance(const RadialKernel& p, Complex z, Complex w) {
  using M3 = Eigen::Matrix3cd;
  const Complex I(0, 1);
  double d0 = p.dp(0);
  auto gamma0 = [&](double x, double y) {
    M3 g;
    g << 1, I * y, -I * x,
        -I * y, y * y - 2 * d0, -I - x * y,
        I * x, I - x * y, x * x - 2 * d0;
    return g;
  };
  double x = z.real(), y = z.imag(), u = w.real(), v = w.imag();
  double a = x - u, b = y - v, s = a * a + b * b;
  double P = p.p(s), D = p.dp(s), DD = p.ddp(s);
  M3 m1, m2, m3;
  m1 << 1, I * y, -I * x,
      -I * v, y * v, -I - x * v,
      I * u, I - u * y, x * u;
  m2 << 0, -a, -b,
      a, -1.0 + I * a * (y + v), I * b * v - I * a * x,
      b, I * b * y - I * a * u, -1.0 - I * b * (x + u);
  m3 << 0, 0, 0,
      0, -a * a, -a * b,
      0, -a * b, -b * b;
  M3 gzw = std::exp(I * (y * u - x * v)) * (P * m1 + 2 * D * m2 + 4 * DD * m3);
  Eigen::Matrix<Complex, 6, 6> m;
  m.topLeftCorner<3, 3>() = gamma0(x, y);
  m.topRightCorner<3, 3>() = gzw;
  m.bottomLeftCorner<3, 3>() = gzw.adjoint();
  m.bottomRightCorner<3, 3>() = gamma0(u, v);
  return m;
}

double wick_oracle_E(const RadialKernel& p, Complex z, Complex w) {
  double s = std::norm(z - w);
  if (s == 0) throw DegeneratePair("wick_oracle_E needs z != w");
  if (std::abs(one_minus_p2(p.p(s))) < kSingular)
    throw DegeneratePair(p.name + ": |P(|z-w|^2)| = 1, conditioning matrix is singular");
  auto m = joint_covariance(p, z, w);
  const int cond[2] = {0, 3}, tgt[4] = {1, 2, 4, 5};
  Eigen::Matrix4cd A;
  Eigen::Matrix<Complex, 4, 2> B;
  Eigen::Matrix2cd C;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) A(i, j) = m(tgt[i], tgt[j]);
    for (int j = 0; j < 2; ++j) B(i, j) = m(tgt[i], cond[j]);
  }
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) C(i, j) = m(cond[i], cond[j]);
  Eigen::Matrix4cd om = A - B * C.inverse() * B.adjoint();
  Complex sum = om(0, 1) * om(2, 3) + om(0, 3) * om(2, 1) - om(1, 0) * om(2, 3) -
                om(1, 3) * om(2, 0);
  return -0.5 * sum.real();
}

double perimeter_integral(const RadialKernel& p) {
  if (decay_violated(p))
    throw DecayViolation(p.name + ": (|P|+|P'|+|P''|)(r^2) r^4 still grows at r^2 = " +
                         fmt(kGridEnd) + "; variance integral not certified");
  const double tol = 1e-9;
  double d0 = p.dp(0);
  auto f = [&](double r) {
    double s = r * r;
    if (s < 1e-12) return -d0;
    double D = p.dp(s);
    return 2 * s * D * D / one_minus_p2(p.p(s));
  };
  // tail beyond R: |P'(s)| <= C/s^2 gives int_R^inf f <= 2C^2 / (5 R^5 (1 - Pmax^2))
  double R = 8;
  for (;; R *= 2) {
    double C = 0, pmax = 0;
    for (int k = 0; k <= 64; ++k) {
      double s = R * R * (1 + 3.0 * k / 64);
      C = std::max(C, decay_quantity(p, s));
      pmax = std::max(pmax, std::abs(p.p(s)));
    }
    double tail = 2 * C * C / (5 * std::pow(R, 5) * one_minus_p2(pmax));
    if (tail < tol / 10) break;
    if (R > 2048)
      throw DecayViolation(p.name + ": variance integral tail not below tolerance by R = " +
                           fmt(R));
  }
  KahanSum acc;
  double a = 0;
  for (double b = 1; a < R; b = std::min(2 * b, R)) {
    acc.add(integrate_adaptive(f, a, b, tol / 100).value);
    a = b;
  }
  return acc.value() / pi;
}

double variance_asymptote(const RadialKernel& p) { return 2 * perimeter_integral(p); }

double charge_variance(const RadialKernel& p, double R) {
  if (!(R > 0)) throw DomainError("charge_variance needs R > 0");
  auto f = [&](double d) {
    double lens = 0;
    if (d < 2 * R)
      lens = 2 * R * R * std::acos(d / (2 * R)) - 0.5 * d * std::sqrt(4 * R * R - d * d);
    return i_prime_regular(p, d * d) * (pi * R * R - lens) * d;
  };
  KahanSum acc;
  int pieces = std::max(1, static_cast<int>(std::ceil(2 * R)));
  for (int k = 0; k < pieces; ++k) {
    double a = 2 * R * k / pieces, b = 2 * R * (k + 1) / pieces;
    acc.add(integrate_adaptive(f, a, b, 1e-12).value);
  }
  // beyond 2R the lens vanishes and int I'(d^2) d dd = -I(4R^2)/2
  return -2 / pi * acc.value() + R * R * i_function(p, 4 * R * R);
}

double tau2_deficit_integral(const RadialKernel& p) {
  auto f = [&](double r) { return i_prime_regular(p, r * r) * r; };
  // (1 + r^4)|I'(r^2)| bounded: tail of int r I' beyond R is below C / (2 R^2)
  double R = 16;
  for (;; R *= 2) {
    double C = 0;
    for (int k = 0; k <= 32; ++k) {
      double r = R * (1 + k / 32.0);
      C = std::max(C, std::pow(r, 4) * std::abs(i_prime(p, r * r)));
    }
    if (C / (2 * R * R) < 1e-10) break;
    if (R > 4096) throw DecayViolation(p.name + ": I' does not decay like r^-4");
  }
  KahanSum acc;
  double a = 0;
  for (double b = 0.5; a < R; b = std::min(b + 0.5 * std::max(1.0, a), R)) {
    acc.add(integrate_adaptive(f, a, b, 1e-13).value);
    a = b;
  }
  return -2 / pi * acc.value();
}

bool ValidationReport::has(const std::string& predicate) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.predicate == predicate; });
}

ValidationReport validate_kernel(const RadialKernel& p) {
  ValidationReport rep;
  double p0 = p.p(0), d0 = p.dp(0);
  if (!(std::abs(p0 - 1) <= 1e-12))
    rep.violations.push_back({"P(0)=1", "P(0) = " + fmt(p0), 0});
  if (!(d0 <= -0.5 + 1e-12))
    rep.violations.push_back({"P'(0)<=-1/2", "P'(0) = " + fmt(d0), 0});
  double delta = 4 * d0 * d0 - 1;
  if (delta < -kPsdTol)
    rep.violations.push_back({"Delta_H>=0", "Delta_H = " + fmt(delta), 0});
  const int n = static_cast<int>(kGridEnd * 256);
  for (int k = 1; k <= n; ++k) {
    double s = k / 256.0, v = p.p(s);
    if (!std::isfinite(v) || std::abs(v) >= 1 - 1e-12) {
      rep.violations.push_back({"|P|<1", "|P(s)| = " + fmt(std::abs(v)), s});
      break;
    }
  }
  if (decay_violated(p))
    rep.violations.push_back(
        {"decay", "(|P|+|P'|+|P''|)(s) s^2 = " + fmt(decay_quantity(p, kGridEnd)) +
                      " still growing", kGridEnd});
  return rep;
}

ValidationReport validate_kernel(const KernelJet& j, OmegaConvention conv) {
  ValidationReport rep;
  try {
    require_finite(j);
  } catch (const Error& e) {
    rep.violations.push_back({"finite", e.what(), 0});
    return rep;
  }
  double o11 = -j.h20 - j.b10 * j.b10, o22 = -j.h02 - j.b01 * j.b01;
  if (o11 < -kPsdTol) rep.violations.push_back({"Omega11>=0", "Omega11 = " + fmt(o11), 0});
  if (o22 < -kPsdTol) rep.violations.push_back({"Omega22>=0", "Omega22 = " + fmt(o22), 0});
  double prod = j.b10 * j.b01, sign = conv == OmegaConvention::regression ? -1.0 : 1.0;
  double re = -j.h11 + sign * prod;
  double det = o11 * o22 - (re * re + 1);
  if (det < -kPsdTol) rep.violations.push_back({"Delta_H>=0", "Delta_H = " + fmt(det), 0});
  return rep;
}

}  // namespace gwhf
