#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gwhf/common.hpp"
#include "gwhf/kernel.hpp"
#include "json.hpp"

namespace gwhf {

struct SampledData;

/// Unit-norm window on the real line with its derivative rule.
struct Window {
  std::string label;
  nlohmann::json spec;
  std::function<Complex(double)> value;
  std::function<Complex(double)> derivative;
  double center = 0;          // |g| is negligible outside center +- support_radius
  double support_radius = 0;
  double freq_lo = 0, freq_hi = 0;  // band holding the spectrum of g
  std::optional<int> hermite_index;
  std::shared_ptr<const SampledData> samples;

  Complex operator()(double t) const { return value(t); }
  double band_width() const { return freq_hi - freq_lo; }
};

struct SampledData {
  std::vector<Complex> values, derivs;  // on t0 + k dt
  double t0 = 0, dt = 0;
};

struct UncertaintyConstants {
  double c1 = 0, c2 = 0, c3 = 0, c4 = 0, c5 = 0;
  double norm = 1;  // ||g||_2^2 as integrated
};

inline constexpr int max_hermite_order = 12;

/// h_0..h_n and h_0'..h_n' at t (unit L2 norm).
void hermite_values(int n, double t, double* h, double* dh);

Window hermite(int r);
/// sum_k coeffs[k] h_k, rescaled to unit norm.
Window hermite_mixture(const std::vector<Complex>& coeffs);
/// (lambda / sqrt(sigma)) exp(-(pi/sigma^2)[(t-x0)^2 + i(xi0 t + xi1 t^2)]),
/// lambda = 2^{1/4} e^{i phase}
Window generalized_gaussian(double sigma, double phase, double x0, double xi0, double xi1);
/// Dense samples g(t0 + k dt); t0 defaults to centering the record.
Window sampled_window(std::vector<Complex> samples, double dt, std::optional<double> t0 = {});
/// Two-column "re im" text file.
Window load_sampled_window(const std::string& path, double dt, std::optional<double> t0 = {});
/// g1(t) = e^{2 pi i (xi0 t + xi1 t^2)} g(t - x0)
Window transform_window(const Window& g, double x0, double xi0, double xi1);

UncertaintyConstants uncertainty_constants(const Window& g);
/// (c2-c1^2)c3 - c2 c4^2 - c5^2 + 2 s c1 c4 c5, s = +1 (regression) or -1 (intro)
double stft_discriminant(const UncertaintyConstants& c,
                         OmegaConvention conv = OmegaConvention::regression);
/// Zeros per unit area of V_g N in STFT coordinates.
double rho1_stft(const UncertaintyConstants& c,
                 OmegaConvention conv = OmegaConvention::regression);
double rho1_stft(const Window& g, OmegaConvention conv = OmegaConvention::regression);
KernelJet jet_from_constants(const UncertaintyConstants& c);
/// pi * rho1(jet_from_constants(c))
double rho1_stft_via_jet(const UncertaintyConstants& c,
                         OmegaConvention conv = OmegaConvention::regression);

/// V_g g(a, b) = int g(t) conj(g(t - a)) e^{-2 pi i t b} dt
Complex ambiguity(const Window& g, double a, double b);

struct AmbiguityKernel {
  std::optional<RadialKernel> radial;   // exact Laguerre profile for Hermite windows
  std::function<Complex(Complex)> H;    // H(z) = e^{-ixy} V_g g(conj(z)/sqrt(pi))
};
AmbiguityKernel ambiguity_kernel(const Window& g);

std::pair<double, double> invariance_check(const Window& g, double x0, double xi0, double xi1,
                                           OmegaConvention conv = OmegaConvention::regression);

}  // namespace gwhf
