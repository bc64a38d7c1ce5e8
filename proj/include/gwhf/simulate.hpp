#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gwhf/common.hpp"
#include "gwhf/rng.hpp"
#include "gwhf/window.hpp"
#include "json.hpp"

namespace gwhf {

/// Complex samples on the lattice origin + spacing * (ix + i iy).
struct FieldGrid {
  std::vector<Complex> values;  // row-major: values[iy * nx + ix]
  int nx = 0, ny = 0;
  Complex origin = 0;
  double spacing = 0;
  Plane plane = Plane::stft;
  std::uint64_t seed = default_seed;
  std::uint32_t realization = 0;
  double margin = 0;  // band between the grid edge and `interior`
  Domain interior;    // statistics are taken on this half-open rectangle
  nlohmann::json meta = nlohmann::json::object();

  Complex point(int ix, int iy) const { return origin + Complex(ix * spacing, iy * spacing); }
  Complex at(int ix, int iy) const { return values[static_cast<std::size_t>(iy) * nx + ix]; }
  Complex& at(int ix, int iy) { return values[static_cast<std::size_t>(iy) * nx + ix]; }
};

/// Pointwise evaluation of the same realization (used for local refinement).
using FieldEvaluator = std::function<Complex(Complex)>;

struct Field {
  FieldGrid grid;
  FieldEvaluator eval;
};

struct SimOptions {
  double spacing = 1.0 / 32;
  double dt = 1.0 / 64;
  std::uint64_t seed = default_seed;
  std::uint32_t realization = 0;
  std::uint32_t component = 0;
  int pad_cells = 3;  // lattice cells kept outside the requested domain
};

/// V_g N(x, y) ~ sqrt(dt) sum_k N_k conj(g(t_k - x)) e^{-2 pi i t_k y}, t_k = k dt.
/// The noise lives on the global lattice k dt, so every grid value is the
/// same discrete STFT regardless of the requested domain.
Field stft_field(const Window& g, const Domain& domain, const SimOptions& opt);
Complex stft_point(const Window& g, Complex z, double dt, const Stream& noise);

/// F(z) = e^{-ixy} V(conj(z)/sqrt(pi)).
Field to_gwhf_plane(const Field& f);
FieldGrid to_gwhf_plane(const FieldGrid& grid);

/// STFT field of g viewed in the GWHF plane; domain and spacing in GWHF units.
Field stft_field_gwhf(const Window& g, const Domain& domain, const SimOptions& opt);

/// Smallest admissible number of series terms for a grid reaching |z| = R.
int gef_min_terms(double R);
/// F(z) = e^{-|z|^2/2} sum_{n<N} xi_n z^n / sqrt(n!); n_terms = 0 picks the minimum.
Field gef_series_field(const Domain& domain, const SimOptions& opt, int n_terms = 0);

enum class PolyKind { pure, full };
PolyKind parse_poly_kind(const std::string& s);

/// Poly-entire GWHF of order q on a GWHF-plane domain; opt.spacing is in GWHF units.
Field polyentire_field(int q, PolyKind kind, const Domain& domain, const SimOptions& opt);

/// Component id reserved for the series coefficients.
inline constexpr std::uint32_t gef_series_component = 0x47454600u;

}  // namespace gwhf
