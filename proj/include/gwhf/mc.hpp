#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gwhf/kernel.hpp"
#include "gwhf/simulate.hpp"
#include "gwhf/specs.hpp"
#include "gwhf/window.hpp"
#include "gwhf/zeros.hpp"
#include "json.hpp"

namespace gwhf {

enum class SourceKind { window, gef_series, polyentire, poisson };

/// What gets simulated. Domain, radii and statistics live in `plane`.
struct McSource {
  SourceKind kind = SourceKind::window;
  std::optional<Window> window;
  Plane plane = Plane::stft;
  int q = 1;
  PolyKind poly = PolyKind::pure;
  double poisson_density = 0;         // points per unit area
  double poisson_charge_density = 0;  // mean signed charge per unit area
  std::optional<RadialKernel> kernel;  // GWHF-plane kernel for variance theory
  std::string label;
};

McSource source_from_window(const Window& g, Plane plane = Plane::stft);
/// gef -> series field; laguerre:r -> pure poly-entire of order r+1;
/// laguerre-avg:q -> full poly-entire. Custom kernels cannot be simulated.
McSource source_from_kernel(const KernelSpec& k);
McSource source_poisson(double density, double charge_density);

struct McConfig {
  McSource source;
  Domain domain{0, 8, 0, 8};
  double spacing = 1.0 / 32;
  double dt = 1.0 / 64;
  int pad_cells = 3;
  int n_realizations = 200;
  std::uint64_t seed = default_seed;
  std::vector<double> radii;
  std::optional<Complex> center;  // defaults to the domain center
  int threads = 0;                // 0: OpenMP default; GWHF_THREADS overrides
  OmegaConvention convention = OmegaConvention::regression;
  int gef_terms = 0;

  Complex disk_center() const { return center ? *center : domain.center(); }
  void validate() const;
  nlohmann::json to_json() const;
};

struct RealizationSummary {
  int count = 0;   // non-degenerate zeros inside the domain
  int charge = 0;  // their signed sum
  std::vector<int> disk_count, disk_charge;
  int degenerate = 0, mismatches = 0, fallbacks = 0, subdivided = 0;
};

struct McItem {
  std::string label;
  double empirical = 0, se = 0, theory = 0, z = 0;
};

struct McReport {
  std::string quantity;  // density | charge_density | charge_variance
  std::vector<McItem> items;
  nlohmann::json config;
  double elapsed_s = 0;
  std::vector<std::string> warnings;
  nlohmann::json extra = nlohmann::json::object();

  /// true iff every |z| <= limit
  bool gate(double limit = 5) const;
  nlohmann::json to_json() const;
  std::string to_csv() const;
};

/// GWHF_THREADS if set, otherwise `requested` (0 keeps the OpenMP default).
int resolve_threads(int requested);

Field simulate_realization(const McConfig& cfg, std::uint32_t realization);
RealizationSummary summarize_realization(const McConfig& cfg, std::uint32_t realization);
std::vector<RealizationSummary> run_realizations(const McConfig& cfg);

double theory_density(const McConfig& cfg);
double theory_density(const McConfig& cfg, OmegaConvention conv);
double theory_charge_density(const McConfig& cfg);
/// Exact finite-R charge variance; NaN when the source has no radial kernel.
double theory_charge_variance(const McConfig& cfg, double R);
double theory_variance_asymptote(const McConfig& cfg);

McReport estimate_intensity(const McConfig& cfg);
McReport estimate_charge_intensity(const McConfig& cfg);
McReport estimate_charge_variance(const McConfig& cfg);

/// Same reports from precomputed summaries (one simulation feeding several reports).
McReport intensity_report(const McConfig& cfg, const std::vector<RealizationSummary>& s);
McReport charge_report(const McConfig& cfg, const std::vector<RealizationSummary>& s);
McReport variance_report(const McConfig& cfg, const std::vector<RealizationSummary>& s);

}  // namespace gwhf
