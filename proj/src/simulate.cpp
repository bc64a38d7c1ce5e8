#include "gwhf/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fft.hpp"

namespace gwhf {

namespace {

const double kSqrtPi = std::sqrt(pi);

std::int64_t floor_div(double v) { return static_cast<std::int64_t>(std::floor(v + 1e-9)); }
std::int64_t ceil_div(double v) { return static_cast<std::int64_t>(std::ceil(v - 1e-9)); }

std::int64_t pos_mod(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

nlohmann::json domain_json(const Domain& d) { return {d.x0, d.x1, d.y0, d.y1}; }

// lattice indices [lo, hi] covering [a, b] plus `pad` cells each side
std::pair<std::int64_t, std::int64_t> lattice_range(double a, double b, double s, int pad) {
  return {floor_div(a / s) - pad, ceil_div(b / s) + pad};
}

}  // namespace

Complex stft_point(const Window& g, Complex z, double dt, const Stream& noise) {
  double x = z.real(), y = z.imag();
  std::int64_t k0 = ceil_div((x + g.center - g.support_radius) / dt);
  std::int64_t k1 = floor_div((x + g.center + g.support_radius) / dt);
  Complex s = 0;
  for (std::int64_t k = k0; k <= k1; ++k) {
    double t = k * dt;
    s += noise.circular_normal(k) * std::conj(g.value(t - x)) *
         std::exp(Complex(0, -2 * pi * std::fmod(t * y, 1.0)));
  }
  return std::sqrt(dt) * s;
}

Field stft_field(const Window& g, const Domain& domain, const SimOptions& opt) {
  if (!(opt.spacing > 0) || !(opt.dt > 0)) throw ConfigError("spacing and dt must be positive");
  if (!(domain.x1 > domain.x0) || !(domain.y1 > domain.y0))
    throw DomainError("empty simulation domain");
  const double dt = opt.dt;
  const std::int64_t M = std::max<std::int64_t>(1, std::llround(1 / (opt.spacing * dt)));
  const double s = 1.0 / (M * dt);

  auto [jx0, jx1] = lattice_range(domain.x0, domain.x1, s, opt.pad_cells);
  auto [my0, my1] = lattice_range(domain.y0, domain.y1, s, opt.pad_cells);
  const int nx = static_cast<int>(jx1 - jx0 + 1), ny = static_cast<int>(my1 - my0 + 1);
  if (nx < 16 || ny < 16)
    throw DomainError("grid has " + std::to_string(nx) + "x" + std::to_string(ny) +
                      " nodes; at least 16x16 required");

  double fmax = std::max(std::abs(g.freq_lo), std::abs(g.freq_hi));
  if (fmax >= 0.5 / dt)
    throw AliasError("window spectrum reaches " + std::to_string(fmax) +
                     ", beyond the Nyquist frequency 1/(2 dt) = " + std::to_string(0.5 / dt));
  double yext = (my1 - my0) * s;
  if (yext + g.band_width() >= 1 / dt) {
    std::ostringstream os;
    os << "y-extent " << yext << " plus window bandwidth " << g.band_width()
       << " exceeds the alias-free band 1/dt = " << 1 / dt << "; decrease dt";
    throw AliasError(os.str());
  }

  const double c = g.center, T = g.support_radius;
  const std::int64_t kmin = ceil_div((jx0 * s + c - T) / dt);
  const std::int64_t kmax = floor_div((jx1 * s + c + T) / dt);
  Stream noise{opt.seed, opt.realization, opt.component};
  std::vector<Complex> N(static_cast<std::size_t>(kmax - kmin + 1));
  for (std::int64_t k = kmin; k <= kmax; ++k) N[k - kmin] = noise.circular_normal(k);

  // when s / dt is an integer, t_k - x_j lies on the dt lattice
  const double ratio = s / dt;
  const bool lattice = std::abs(ratio - std::round(ratio)) < 1e-9;
  const std::int64_t r = std::llround(ratio);
  std::int64_t tab_lo = 0;
  std::vector<Complex> table;
  if (lattice) {
    tab_lo = ceil_div((c - T) / dt) - 1;
    std::int64_t tab_hi = floor_div((c + T) / dt) + 1;
    table.resize(static_cast<std::size_t>(tab_hi - tab_lo + 1));
    for (std::int64_t n = tab_lo; n <= tab_hi; ++n) table[n - tab_lo] = std::conj(g.value(n * dt));
  }

  const std::int64_t Kmax = floor_div(2 * T / dt) + 3;
  const std::int64_t stride = std::max<std::int64_t>(1, (Kmax + M - 1) / M);
  const std::int64_t L = stride * M;
  std::vector<Complex> twiddle(static_cast<std::size_t>(L));
  for (std::int64_t p = 0; p < L; ++p) twiddle[p] = std::polar(1.0, -2 * pi * double(p) / double(L));

  Field f;
  FieldGrid& grid = f.grid;
  grid.nx = nx;
  grid.ny = ny;
  grid.values.assign(static_cast<std::size_t>(nx) * ny, 0.0);
  grid.origin = Complex(jx0 * s, my0 * s);
  grid.spacing = s;
  grid.plane = Plane::stft;
  grid.seed = opt.seed;
  grid.realization = opt.realization;
  grid.margin = opt.pad_cells * s;
  grid.interior = domain;
  grid.meta = {{"simulator", "stft"},
               {"window", g.spec},
               {"dt", dt},
               {"spacing_requested", opt.spacing},
               {"component", opt.component},
               {"domain", domain_json(domain)}};

  detail::FftBuffer buf(static_cast<int>(L), FFTW_FORWARD);
  const double sdt = std::sqrt(dt);
  for (int ix = 0; ix < nx; ++ix) {
    const std::int64_t j = jx0 + ix;
    const double x = j * s;
    const std::int64_t k0 = ceil_div((x + c - T) / dt);
    const std::int64_t k1 = std::min(floor_div((x + c + T) / dt), k0 + L - 1);
    Complex* b = buf.data();
    std::fill(b, b + L, Complex(0));
    for (std::int64_t k = k0; k <= k1; ++k) {
      Complex w = lattice ? table[k - j * r - tab_lo] : std::conj(g.value(k * dt - x));
      b[k - k0] = N[k - kmin] * w;
    }
    buf.execute();
    const std::int64_t k0m = pos_mod(k0, L);
    for (int iy = 0; iy < ny; ++iy) {
      const std::int64_t q = pos_mod((my0 + iy) * stride, L);
      const std::int64_t p = (k0m * q) % L;
      grid.at(ix, iy) = sdt * twiddle[p] * b[q];
    }
  }

  Window gw = g;
  f.eval = [gw, dt, noise](Complex z) { return stft_point(gw, z, dt, noise); };
  return f;
}

FieldGrid to_gwhf_plane(const FieldGrid& in) {
  if (in.plane != Plane::stft)
    throw ConfigError("to_gwhf_plane applied to a grid already in the gwhf plane");
  FieldGrid out = in;
  out.plane = Plane::gwhf;
  out.spacing = kSqrtPi * in.spacing;
  double ytop = in.origin.imag() + (in.ny - 1) * in.spacing;
  out.origin = Complex(kSqrtPi * in.origin.real(), -kSqrtPi * ytop);
  out.margin = kSqrtPi * in.margin;
  out.interior = {kSqrtPi * in.interior.x0, kSqrtPi * in.interior.x1, -kSqrtPi * in.interior.y1,
                  -kSqrtPi * in.interior.y0};
  for (int iy = 0; iy < out.ny; ++iy)
    for (int ix = 0; ix < out.nx; ++ix) {
      Complex z = out.point(ix, iy);
      out.at(ix, iy) = std::exp(Complex(0, -z.real() * z.imag())) * in.at(ix, in.ny - 1 - iy);
    }
  out.meta["plane_map"] = "F(z) = exp(-ixy) V(conj(z)/sqrt(pi))";
  return out;
}

Field to_gwhf_plane(const Field& f) {
  Field out;
  out.grid = to_gwhf_plane(f.grid);
  if (f.eval) {
    auto ev = f.eval;
    out.eval = [ev](Complex z) {
      return std::exp(Complex(0, -z.real() * z.imag())) * ev(std::conj(z) / kSqrtPi);
    };
  }
  return out;
}

int gef_min_terms(double R) { return static_cast<int>(std::ceil(std::exp(1.0) * R * R + 10 * R)); }

Field gef_series_field(const Domain& domain, const SimOptions& opt, int n_terms) {
  if (!(opt.spacing > 0)) throw ConfigError("spacing must be positive");
  const double s = opt.spacing;
  auto [jx0, jx1] = lattice_range(domain.x0, domain.x1, s, opt.pad_cells);
  auto [my0, my1] = lattice_range(domain.y0, domain.y1, s, opt.pad_cells);
  const int nx = static_cast<int>(jx1 - jx0 + 1), ny = static_cast<int>(my1 - my0 + 1);
  if (nx < 16 || ny < 16) throw DomainError("grid smaller than 16x16");
  double R = 0;
  for (double x : {jx0 * s, jx1 * s})
    for (double y : {my0 * s, my1 * s}) R = std::max(R, std::hypot(x, y));
  int need = gef_min_terms(R);
  if (n_terms == 0) n_terms = need + 1;
  if (n_terms < need)
    throw ConfigError("gef series needs at least " + std::to_string(need) + " terms for |z| <= " +
                      std::to_string(R) + ", got " + std::to_string(n_terms));

  Stream st{opt.seed, opt.realization, gef_series_component};
  auto xi = std::make_shared<std::vector<Complex>>(n_terms);
  auto isq = std::make_shared<std::vector<double>>(n_terms);
  for (int n = 0; n < n_terms; ++n) {
    (*xi)[n] = st.circular_normal(n);
    (*isq)[n] = n == 0 ? 1.0 : 1 / std::sqrt(double(n));
  }
  auto eval = [xi, isq](Complex z) {
    Complex t = std::exp(-std::norm(z) / 2), sum = (*xi)[0] * t;
    const std::size_t N = xi->size();
    for (std::size_t n = 1; n < N; ++n) {
      t *= z * (*isq)[n];
      sum += (*xi)[n] * t;
    }
    return sum;
  };

  Field f;
  FieldGrid& grid = f.grid;
  grid.nx = nx;
  grid.ny = ny;
  grid.origin = Complex(jx0 * s, my0 * s);
  grid.spacing = s;
  grid.plane = Plane::gwhf;
  grid.seed = opt.seed;
  grid.realization = opt.realization;
  grid.margin = opt.pad_cells * s;
  grid.interior = domain;
  grid.meta = {{"simulator", "gef-series"}, {"n_terms", n_terms}, {"domain", domain_json(domain)}};
  grid.values.resize(static_cast<std::size_t>(nx) * ny);
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix) grid.at(ix, iy) = eval(grid.point(ix, iy));
  f.eval = eval;
  return f;
}

PolyKind parse_poly_kind(const std::string& s) {
  if (s == "pure") return PolyKind::pure;
  if (s == "full") return PolyKind::full;
  throw ConfigError("poly-entire kind must be pure or full, got '" + s + "'");
}

Field stft_field_gwhf(const Window& g, const Domain& d, const SimOptions& opt) {
  Domain sd{d.x0 / kSqrtPi, d.x1 / kSqrtPi, -d.y1 / kSqrtPi, -d.y0 / kSqrtPi};
  SimOptions so = opt;
  so.spacing = opt.spacing / kSqrtPi;
  Field out = to_gwhf_plane(stft_field(g, sd, so));
  out.grid.interior = d;
  out.grid.meta["domain"] = domain_json(d);
  return out;
}

Field polyentire_field(int q, PolyKind kind, const Domain& d, const SimOptions& opt) {
  if (q < 1 || q > 8) throw ConfigError("poly-entire order q must lie in [1, 8]");
  Domain sd{d.x0 / kSqrtPi, d.x1 / kSqrtPi, -d.y1 / kSqrtPi, -d.y0 / kSqrtPi};
  SimOptions so = opt;
  so.spacing = opt.spacing / kSqrtPi;
  Field out;
  if (kind == PolyKind::pure) {
    out = stft_field(hermite(q - 1), sd, so);
  } else {
    std::vector<FieldEvaluator> evs;
    for (int k = 0; k < q; ++k) {
      so.component = static_cast<std::uint32_t>(k);
      Field fk = stft_field(hermite(k), sd, so);
      if (k == 0) {
        out = std::move(fk);
      } else {
        for (std::size_t i = 0; i < out.grid.values.size(); ++i) out.grid.values[i] += fk.grid.values[i];
      }
      evs.push_back(k == 0 ? out.eval : fk.eval);
    }
    double w = 1 / std::sqrt(double(q));
    for (auto& v : out.grid.values) v *= w;
    out.eval = [evs, w](Complex z) {
      Complex s = 0;
      for (auto& e : evs) s += e(z);
      return w * s;
    };
  }
  out = to_gwhf_plane(out);
  out.grid.interior = d;
  out.grid.meta["simulator"] = "polyentire";
  out.grid.meta["q"] = q;
  out.grid.meta["kind"] = kind == PolyKind::pure ? "pure" : "full";
  out.grid.meta["domain"] = domain_json(d);
  return out;
}

}  // namespace gwhf
