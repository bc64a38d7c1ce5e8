#include "gwhf/window.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "fft.hpp"
#include "gwhf/quadrature.hpp"

namespace gwhf {

namespace {

const double kSqrt2Pi = std::sqrt(2 * pi);
const double kQuarter2Pi = std::pow(2 * pi, 0.25);

// outward scan for the radius beyond which g, t g and g' are negligible
double find_support(const Window& g, double start) {
  const double step = 1.0 / 64, quiet = 0.5, eps = 1e-13;
  double best = 0;
  for (int dir : {-1, 1}) {
    double r = start, quiet_from = -1;
    for (int it = 0; it < 200000; ++it, r += step) {
      double t = g.center + dir * r;
      bool small = std::abs(g.value(t)) * std::max(1.0, std::abs(t)) < eps &&
                   std::abs(g.derivative(t)) < eps;
      if (!small) {
        quiet_from = -1;
        continue;
      }
      if (quiet_from < 0) quiet_from = r;
      if (r - quiet_from >= quiet) break;
    }
    best = std::max(best, quiet_from < 0 ? r : quiet_from);
  }
  return best;
}

// smallest band [lo, hi] outside which |g^| < 1e-10 max|g^|
void find_band(Window& g) {
  std::vector<Complex> v;
  double delta = 1.0 / 64;
  for (int attempt = 0; attempt < 6; ++attempt, delta /= 2) {
    int n = static_cast<int>(std::ceil(2 * g.support_radius / delta)) + 1;
    int L = 1;
    while (L < 4 * n) L <<= 1;
    v.assign(L, 0.0);
    double t0 = g.center - g.support_radius;
    if (g.samples) {
      t0 = g.samples->t0;
      delta = g.samples->dt;
      n = static_cast<int>(g.samples->values.size());
      L = 1;
      while (L < 4 * n) L <<= 1;
      v.assign(L, 0.0);
      std::copy(g.samples->values.begin(), g.samples->values.end(), v.begin());
    } else {
      for (int k = 0; k < n; ++k) v[k] = g.value(t0 + k * delta);
    }
    detail::fft(v, FFTW_FORWARD);
    double mx = 0;
    for (auto& c : v) mx = std::max(mx, std::abs(c));
    double thr = 1e-10 * mx;
    double lo = 1e300, hi = -1e300, edge = 0;
    for (int k = 0; k < L; ++k) {
      int kk = k < L / 2 ? k : k - L;
      double f = kk / (L * delta);
      double a = std::abs(v[k]);
      if (std::abs(kk) > 0.45 * L) edge = std::max(edge, a);
      if (a > thr) {
        lo = std::min(lo, f);
        hi = std::max(hi, f);
      }
    }
    if (edge <= thr || g.samples) {
      double pad = 1 / (L * delta);
      g.freq_lo = lo - pad;
      g.freq_hi = hi + pad;
      return;
    }
  }
  throw InvalidWindow(g.label + ": spectrum not resolved at sampling step 1/2048");
}

Window finish(Window g, double start) {
  g.support_radius = find_support(g, start);
  find_band(g);
  return g;
}

}  // namespace

void hermite_values(int n, double t, double* h, double* dh) {
  double x = kSqrt2Pi * t;
  double psi[max_hermite_order + 3];
  psi[0] = std::pow(pi, -0.25) * std::exp(-x * x / 2);
  if (n + 1 >= 1) psi[1] = std::sqrt(2.0) * x * psi[0];
  for (int k = 1; k + 1 <= n + 1; ++k)
    psi[k + 1] = std::sqrt(2.0 / (k + 1)) * x * psi[k] - std::sqrt(double(k) / (k + 1)) * psi[k - 1];
  for (int k = 0; k <= n; ++k) {
    h[k] = kQuarter2Pi * psi[k];
    double d = -std::sqrt((k + 1) / 2.0) * psi[k + 1];
    if (k > 0) d += std::sqrt(k / 2.0) * psi[k - 1];
    dh[k] = kQuarter2Pi * kSqrt2Pi * d;
  }
}

Window hermite(int r) {
  if (r < 0 || r > max_hermite_order)
    throw InvalidWindow("hermite order " + std::to_string(r) + " outside [0, " +
                        std::to_string(max_hermite_order) + "]");
  std::vector<Complex> c(r + 1, 0.0);
  c[r] = 1;
  Window g = hermite_mixture(c);
  g.label = "hermite:" + std::to_string(r);
  g.spec = {{"family", "hermite"}, {"r", r}};
  g.hermite_index = r;
  return g;
}

Window hermite_mixture(const std::vector<Complex>& coeffs) {
  if (coeffs.empty()) throw InvalidWindow("hermite mixture needs coefficients");
  int n = static_cast<int>(coeffs.size()) - 1;
  if (n > max_hermite_order)
    throw InvalidWindow("hermite mixture order above " + std::to_string(max_hermite_order));
  double nrm = 0;
  for (auto& c : coeffs) nrm += std::norm(c);
  if (!(nrm > 0)) throw InvalidWindow("hermite mixture has zero norm");
  auto c = std::make_shared<std::vector<Complex>>(coeffs);
  for (auto& a : *c) a /= std::sqrt(nrm);
  Window g;
  g.label = "hermite-mixture";
  nlohmann::json cj = nlohmann::json::array();
  for (auto& a : coeffs) cj.push_back({a.real(), a.imag()});
  g.spec = {{"family", "hermite-mixture"}, {"coeffs", cj}};
  g.value = [c, n](double t) {
    double h[max_hermite_order + 1], dh[max_hermite_order + 1];
    hermite_values(n, t, h, dh);
    Complex s = 0;
    for (int k = 0; k <= n; ++k) s += (*c)[k] * h[k];
    return s;
  };
  g.derivative = [c, n](double t) {
    double h[max_hermite_order + 1], dh[max_hermite_order + 1];
    hermite_values(n, t, h, dh);
    Complex s = 0;
    for (int k = 0; k <= n; ++k) s += (*c)[k] * dh[k];
    return s;
  };
  int nonzero = 0;
  for (int k = 0; k <= n; ++k)
    if ((*c)[k] != 0.0) ++nonzero;
  if (nonzero == 1)
    for (int k = 0; k <= n; ++k)
      if ((*c)[k] != 0.0 && std::abs((*c)[k] - 1.0) < 1e-15) g.hermite_index = k;
  return finish(std::move(g), std::sqrt(2.0 * n + 1) / kSqrt2Pi);
}

Window generalized_gaussian(double sigma, double phase, double x0, double xi0, double xi1) {
  if (!(sigma > 0)) throw InvalidWindow("generalized gaussian needs sigma > 0");
  Complex lam = std::pow(2.0, 0.25) * std::exp(Complex(0, phase));
  Complex pre = lam / std::sqrt(sigma);
  double a = pi / (sigma * sigma);
  Window g;
  g.label = "generalized-gaussian";
  g.spec = {{"family", "generalized-gaussian"}, {"params", {sigma, phase, x0, xi0, xi1}}};
  g.value = [=](double t) {
    return pre * std::exp(-a * Complex((t - x0) * (t - x0), xi0 * t + xi1 * t * t));
  };
  g.derivative = [=](double t) {
    Complex e = pre * std::exp(-a * Complex((t - x0) * (t - x0), xi0 * t + xi1 * t * t));
    return -a * Complex(2 * (t - x0), xi0 + 2 * xi1 * t) * e;
  };
  g.center = x0;
  return finish(std::move(g), 0);
}

Window sampled_window(std::vector<Complex> samples, double dt, std::optional<double> t0) {
  if (samples.size() < 16) throw InvalidWindow("sampled window needs at least 16 samples");
  if (!(dt > 0) || dt > 1.0 / 64 + 1e-15)
    throw InvalidWindow("sampled window needs 0 < dt <= 1/64");
  const int n = static_cast<int>(samples.size());
  double nrm = 0;
  for (auto& s : samples) nrm += std::norm(s);
  nrm *= dt;
  if (!(nrm > 0)) throw InvalidWindow("sampled window has zero norm");
  for (auto& s : samples) s /= std::sqrt(nrm);

  auto data = std::make_shared<SampledData>();
  data->dt = dt;
  data->t0 = t0 ? *t0 : -0.5 * (n - 1) * dt;
  data->values = samples;

  int L = 1;
  while (L < 2 * n) L <<= 1;
  std::vector<Complex> spec(L, 0.0);
  std::copy(samples.begin(), samples.end(), spec.begin());
  detail::fft(spec, FFTW_FORWARD);
  auto freq = [&](int k) { return (k < L / 2 ? k : k - L) / (L * dt); };
  std::vector<Complex> dspec(L);
  for (int k = 0; k < L; ++k)
    dspec[k] = k == L / 2 ? Complex(0) : spec[k] * Complex(0, 2 * pi * freq(k));
  std::vector<Complex> d = dspec;
  detail::fft(d, FFTW_BACKWARD);
  data->derivs.resize(n);
  for (int k = 0; k < n; ++k) data->derivs[k] = d[k] / double(L);

  // band-limited 16x upsampling, then local cubic interpolation
  const int up = 16, Lu = up * L;
  auto upsample = [&](const std::vector<Complex>& s) {
    auto fine = std::make_shared<std::vector<Complex>>(Lu, 0.0);
    for (int k = 0; k < L / 2; ++k) (*fine)[k] = s[k] / double(L);
    for (int k = L / 2 + 1; k < L; ++k) (*fine)[Lu - L + k] = s[k] / double(L);
    detail::fft(*fine, FFTW_BACKWARD);
    return fine;
  };
  auto vf = upsample(spec), df = upsample(dspec);
  double h = dt / up, start = data->t0, span = (n - 1) * dt;
  auto interp = [h, start, span](std::shared_ptr<std::vector<Complex>> f) {
    return [f, h, start, span](double t) -> Complex {
      double u = (t - start) / h;
      if (u < 0 || t - start > span) return 0.0;
      int i = static_cast<int>(std::floor(u));
      double x = u - i;
      double w[4] = {-x * (x - 1) * (x - 2) / 6, (x + 1) * (x - 1) * (x - 2) / 2,
                     -(x + 1) * x * (x - 2) / 2, (x + 1) * x * (x - 1) / 6};
      Complex s = 0;
      const int m = static_cast<int>(f->size());
      for (int j = 0; j < 4; ++j) {
        int idx = i - 1 + j;
        if (idx >= 0 && idx < m) s += w[j] * (*f)[idx];
      }
      return s;
    };
  };
  Window g;
  g.label = "samples";
  g.spec = {{"family", "samples"}, {"dt", dt}, {"n", n}, {"t0", data->t0}};
  g.value = interp(vf);
  g.derivative = interp(df);
  g.center = data->t0 + 0.5 * span;
  g.support_radius = 0.5 * span;
  g.samples = data;
  find_band(g);
  return g;
}

Window load_sampled_window(const std::string& path, double dt, std::optional<double> t0) {
  std::ifstream in(path);
  if (!in) throw InvalidWindow("cannot open window samples '" + path + "'");
  std::vector<Complex> s;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream is(line);
    double re = 0, im = 0;
    if (!(is >> re)) throw InvalidWindow(path + ":" + std::to_string(lineno) + ": expected 're im'");
    is >> im;
    s.emplace_back(re, im);
  }
  Window g = sampled_window(std::move(s), dt, t0);
  g.spec["samples_path"] = path;
  return g;
}

Window transform_window(const Window& g, double x0, double xi0, double xi1) {
  Window w;
  w.label = g.label + "@shift";
  w.spec = {{"family", "transformed"}, {"base", g.spec}, {"x0", x0}, {"xi0", xi0}, {"xi1", xi1}};
  auto v = g.value, d = g.derivative;
  w.value = [=](double t) {
    return std::exp(Complex(0, 2 * pi * (xi0 * t + xi1 * t * t))) * v(t - x0);
  };
  w.derivative = [=](double t) {
    Complex e = std::exp(Complex(0, 2 * pi * (xi0 * t + xi1 * t * t)));
    return e * (Complex(0, 2 * pi * (xi0 + 2 * xi1 * t)) * v(t - x0) + d(t - x0));
  };
  w.center = g.center + x0;
  if (g.samples) {
    w.support_radius = g.support_radius;
    find_band(w);
    return w;
  }
  return finish(std::move(w), 0.5 * g.support_radius);
}

UncertaintyConstants uncertainty_constants(const Window& g) {
  struct Acc {
    double n = 0, m1 = 0, m2 = 0, k3 = 0;
    Complex J = 0, K = 0;
  };
  auto add = [](Acc& a, double t, Complex v, Complex d, double w) {
    double av = std::norm(v);
    Complex vd = v * std::conj(d);
    a.n += w * av;
    a.m1 += w * t * av;
    a.m2 += w * t * t * av;
    a.k3 += w * std::norm(d);
    a.J += w * vd;
    a.K += w * t * vd;
  };
  Acc acc;
  if (g.samples) {
    const auto& s = *g.samples;
    for (std::size_t k = 0; k < s.values.size(); ++k)
      add(acc, s.t0 + k * s.dt, s.values[k], s.derivs[k], s.dt);
    double tail = std::max(std::abs(s.values.front()), std::abs(s.values.back()));
    if (tail > 1e-6)
      throw DecayViolation(g.label + ": samples do not decay at the record ends (|g| = " +
                           std::to_string(tail) + ")");
  } else {
    double a = g.center - g.support_radius, b = g.center + g.support_radius;
    double tail = std::max({std::abs(g.value(a)) * std::max(1.0, std::abs(a)),
                            std::abs(g.value(b)) * std::max(1.0, std::abs(b)),
                            std::abs(g.derivative(a)), std::abs(g.derivative(b))});
    if (tail > 1e-10)
      throw DecayViolation(g.label + ": window tail not negligible at the support radius");
    Acc prev;
    bool have_prev = false;
    for (int panels = 8; panels <= 8192; panels *= 2) {
      Acc cur;
      gauss_panels([&](double t, double w) { add(cur, t, g.value(t), g.derivative(t), w); }, a, b,
                   panels);
      if (have_prev) {
        double diff = std::max({std::abs(cur.n - prev.n), std::abs(cur.m1 - prev.m1),
                                std::abs(cur.m2 - prev.m2), std::abs(cur.k3 - prev.k3),
                                std::abs(cur.J - prev.J), std::abs(cur.K - prev.K)});
        if (diff < 1e-10) {
          acc = cur;
          break;
        }
      }
      prev = cur;
      have_prev = true;
      acc = cur;
    }
  }
  if (std::abs(acc.n - 1) > 1e-8)
    throw InvalidWindow(g.label + ": window is not unit norm (||g||^2 = " + std::to_string(acc.n) +
                        ")");
  UncertaintyConstants c;
  c.norm = acc.n;
  c.c1 = acc.m1;
  c.c2 = acc.m2;
  c.c3 = acc.k3;
  c.c4 = acc.J.imag();
  c.c5 = acc.K.imag();
  return c;
}

double stft_discriminant(const UncertaintyConstants& c, OmegaConvention conv) {
  double s = conv == OmegaConvention::regression ? 1.0 : -1.0;
  return (c.c2 - c.c1 * c.c1) * c.c3 - c.c2 * c.c4 * c.c4 - c.c5 * c.c5 +
         2 * s * c.c1 * c.c4 * c.c5;
}

double rho1_stft(const UncertaintyConstants& c, OmegaConvention conv) {
  double D = stft_discriminant(c, conv);
  if (!(D > 0)) throw InvalidWindow("uncertainty discriminant is not positive");
  return (4 * D + 1) / (4 * std::sqrt(D));
}

double rho1_stft(const Window& g, OmegaConvention conv) {
  return rho1_stft(uncertainty_constants(g), conv);
}

KernelJet jet_from_constants(const UncertaintyConstants& c) {
  double sp = std::sqrt(pi);
  return {-c.c4 / sp, 2 * sp * c.c1, -c.c3 / pi, -4 * pi * c.c2, 2 * c.c5};
}

double rho1_stft_via_jet(const UncertaintyConstants& c, OmegaConvention conv) {
  return pi * rho1(jet_from_constants(c), conv);
}

Complex ambiguity(const Window& g, double a, double b) {
  double lo = std::max(g.center - g.support_radius, g.center + a - g.support_radius);
  double hi = std::min(g.center + g.support_radius, g.center + a + g.support_radius);
  if (!(hi > lo)) return 0.0;
  auto f = [&](double t) {
    return g.value(t) * std::conj(g.value(t - a)) * std::exp(Complex(0, -2 * pi * t * b));
  };
  Complex prev = 0;
  for (int panels = 4; panels <= 4096; panels *= 2) {
    Complex cur = 0;
    gauss_panels([&](double t, double w) { cur += w * f(t); }, lo, hi, panels);
    if (panels > 4 && std::abs(cur - prev) < 1e-13) return cur;
    prev = cur;
  }
  return prev;
}

AmbiguityKernel ambiguity_kernel(const Window& g) {
  AmbiguityKernel k;
  const double sp = std::sqrt(pi);
  if (g.hermite_index) {
    auto rk = laguerre_kernel(*g.hermite_index);
    k.radial = rk;
    k.H = [rk](Complex z) { return Complex(rk.p(std::norm(z))); };
    return k;
  }
  k.H = [g, sp](Complex z) {
    double x = z.real(), y = z.imag();
    return std::exp(Complex(0, -x * y)) * ambiguity(g, x / sp, -y / sp);
  };
  return k;
}

std::pair<double, double> invariance_check(const Window& g, double x0, double xi0, double xi1,
                                           OmegaConvention conv) {
  Window g1 = transform_window(g, x0, xi0, xi1);
  return {rho1_stft(g, conv), rho1_stft(g1, conv)};
}

}  // namespace gwhf
