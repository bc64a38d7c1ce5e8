#pragma once

#include <Eigen/Core>
#include <functional>
#include <string>
#include <vector>

#include "gwhf/common.hpp"

namespace gwhf {

/// Second-order data of a twisted kernel H at 0:
/// H^(1,0)(0) = i b10, H^(0,1)(0) = i b01, and the real second derivatives.
struct KernelJet {
  double b10 = 0, b01 = 0, h20 = 0, h02 = 0, h11 = 0;
};

/// Off-diagonal sign of the conditional covariance.
/// regression: Omega12 = -h11 - i - b10*b01 (what conditioning Gamma(0) gives)
/// intro:      Omega12 = -h11 - i + b10*b01 (compatibility switch)
enum class OmegaConvention { regression, intro };

const char* to_string(OmegaConvention c);
OmegaConvention parse_convention(const std::string& s);

struct ConditionalCov2 {
  Eigen::Matrix2cd omega;
  double det() const { return (omega(0, 0) * omega(1, 1) - omega(0, 1) * omega(1, 0)).real(); }
};

/// H(z) = P(|z|^2) with analytic P, P', P''.
struct RadialKernel {
  std::string name;
  std::function<double(double)> p, dp, ddp;
};

RadialKernel gef_kernel();
/// P(t) = L_r(t) e^{-t/2}; the twisted kernel of the Hermite window h_r.
RadialKernel laguerre_kernel(int r);
/// P(t) = q^{-1} L^{(1)}_{q-1}(t) e^{-t/2}; full-type poly-entire of order q.
RadialKernel laguerre_avg_kernel(int q);
/// P(t) = e^{-a t}
RadialKernel exp_kernel(double a);
/// P(t) = (1 + a t / n)^{-n}
RadialKernel rational_kernel(double a, int n);

double laguerre(int n, double t);
/// L^{(1)}_n(t) = sum_{k<=n} L_k(t)
double laguerre_sum(int n, double t);
double laguerre_general(int n, double alpha, double t);

KernelJet jet_from_radial(const RadialKernel& p);
ConditionalCov2 conditional_cov(const KernelJet& jet,
                                OmegaConvention conv = OmegaConvention::regression);
double delta_h(const KernelJet& jet, OmegaConvention conv = OmegaConvention::regression);
/// First intensity (zeros per unit area, GWHF plane) from Delta_H.
double rho1_from_delta(double delta);
double rho1(const KernelJet& jet, OmegaConvention conv = OmegaConvention::regression);
double rho1_radial(const RadialKernel& p);
double rho1_charged();

double i_function(const RadialKernel& p, double s);
double i_prime(const RadialKernel& p, double s);
double tau2_charged(const RadialKernel& p, double d);

/// Conditional mean of jac F(z) jac F(w) given F(z) = F(w) = 0, by
/// Gaussian regression on the 6x6 covariance and Wick's formula.
double wick_oracle_E(const RadialKernel& p, Complex z, Complex w);
/// Covariance of (F, F10, F01)(z) and (F, F10, F01)(w) for a radial kernel.
Eigen::Matrix<Complex, 6, 6> joint_covariance(const RadialKernel& p, Complex z, Complex w);

/// (1/pi) int_0^inf 2 r^2 P'(r^2)^2 / (1 - P(r^2)^2) dr
double perimeter_integral(const RadialKernel& p);
/// lim Var[charge in B_R] / R, equal to 2 * perimeter_integral.
double variance_asymptote(const RadialKernel& p);
/// Exact variance of the charge in a disk of radius R.
double charge_variance(const RadialKernel& p, double R);
/// (1/pi^2) int (1 - pi^2 tau2) dA over the plane; equals rho1_radial.
double tau2_deficit_integral(const RadialKernel& p);

struct Violation {
  std::string predicate;
  std::string detail;
  double at = 0;  // grid point where it was observed (s = |z|^2)
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  bool has(const std::string& predicate) const;
};

ValidationReport validate_kernel(const RadialKernel& p);
ValidationReport validate_kernel(const KernelJet& jet,
                                 OmegaConvention conv = OmegaConvention::regression);

}  // namespace gwhf
