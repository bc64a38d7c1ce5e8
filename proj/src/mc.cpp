#include "gwhf/mc.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <limits>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "gwhf/quadrature.hpp"

namespace gwhf {

namespace {

constexpr std::uint32_t kPoissonComponent = 0x504F4953u;
const double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

const char* kind_name(SourceKind k) {
  switch (k) {
    case SourceKind::window: return "window";
    case SourceKind::gef_series: return "gef_series";
    case SourceKind::polyentire: return "polyentire";
    case SourceKind::poisson: return "poisson";
  }
  return "?";
}

McItem make_item(std::string label, double emp, double se, double theory) {
  McItem it{std::move(label), emp, se, theory, kNaN};
  if (std::isfinite(theory) && se > 0) it.z = (emp - theory) / se;
  return it;
}

nlohmann::json num_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

struct Moments {
  double n = 0, mean = 0, var = 0, se_mean = 0, se_var = 0;
};

// integer samples: sums are exact, so the result is order independent
Moments moments(const std::vector<long long>& x) {
  Moments m;
  m.n = static_cast<double>(x.size());
  long long s1 = 0;
  for (auto v : x) s1 += v;
  m.mean = s1 / m.n;
  KahanSum s2, s4;
  for (auto v : x) {
    double d = v - m.mean;
    s2.add(d * d);
    s4.add(d * d * d * d);
  }
  m.var = s2.value() / (m.n - 1);
  m.se_mean = std::sqrt(m.var / m.n);
  double m4 = s4.value() / m.n;
  double vv = (m4 - (m.n - 3) / (m.n - 1) * m.var * m.var) / m.n;
  m.se_var = std::sqrt(std::max(vv, 0.0));
  return m;
}

std::vector<double> leave_one_out_var(const std::vector<long long>& x) {
  long long s1 = 0, s2 = 0;
  for (auto v : x) {
    s1 += v;
    s2 += v * v;
  }
  double n1 = static_cast<double>(x.size()) - 1;
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    double a = static_cast<double>(s1 - x[i]);
    double b = static_cast<double>(s2 - x[i] * x[i]);
    out[i] = (b - a * a / n1) / (n1 - 1);
  }
  return out;
}

RealizationSummary poisson_realization(const McConfig& cfg, std::uint32_t r) {
  const McSource& src = cfg.source;
  Stream st{cfg.seed, r, kPoissonComponent};
  double lambda = src.poisson_density * cfg.domain.area();
  double p_plus = src.poisson_density > 0 ? 0.5 * (1 + src.poisson_charge_density / src.poisson_density) : 0.5;
  // arrival times of a rate-lambda process on [0, 1]
  std::int64_t idx = 0;
  double t = 0;
  std::vector<ChargedZero> pts;
  while (true) {
    auto u = st.uniforms(idx++);
    t += -std::log(u[0]) / lambda;
    if (t >= 1) break;
    auto v = st.uniforms(idx++);
    ChargedZero z;
    z.position = {cfg.domain.x0 + v[0] * cfg.domain.width(), cfg.domain.y0 + v[1] * cfg.domain.height()};
    z.charge = z.winding = z.jacobian_sign = (u[1] < p_plus) ? 1 : -1;
    pts.push_back(z);
  }
  RealizationSummary s;
  for (const auto& z : pts) {
    ++s.count;
    s.charge += z.charge;
  }
  if (!cfg.radii.empty()) {
    for (const auto& d : disk_stats(pts, cfg.disk_center(), cfg.radii, cfg.domain)) {
      s.disk_count.push_back(d.count);
      s.disk_charge.push_back(d.total_charge);
    }
  }
  return s;
}

nlohmann::json report_config(const McConfig& cfg) { return cfg.to_json(); }

}  // namespace

McSource source_from_window(const Window& g, Plane plane) {
  McSource s;
  s.kind = SourceKind::window;
  s.window = g;
  s.plane = plane;
  if (g.hermite_index) s.kernel = laguerre_kernel(*g.hermite_index);
  s.label = g.label;
  return s;
}

McSource source_from_kernel(const KernelSpec& k) {
  McSource s;
  s.plane = Plane::gwhf;
  if (k.family == "gef") {
    s.kind = SourceKind::gef_series;
    s.label = "gef";
  } else if (k.family == "laguerre") {
    s.kind = SourceKind::polyentire;
    s.q = k.order + 1;
    s.poly = PolyKind::pure;
    s.label = "laguerre:" + std::to_string(k.order);
  } else if (k.family == "laguerre-avg") {
    s.kind = SourceKind::polyentire;
    s.q = k.order;
    s.poly = PolyKind::full;
    s.label = "laguerre-avg:" + std::to_string(k.order);
  } else {
    throw ConfigError("kernel family '" + k.family +
                      "' has no built-in simulator (use gef, laguerre:r or laguerre-avg:q)");
  }
  s.kernel = k.radial;
  return s;
}

McSource source_poisson(double density, double charge_density) {
  if (!(density > 0) || std::abs(charge_density) > density)
    throw ConfigError("poisson control needs density > 0 and |charge density| <= density");
  McSource s;
  s.kind = SourceKind::poisson;
  s.plane = Plane::gwhf;
  s.poisson_density = density;
  s.poisson_charge_density = charge_density;
  s.label = "poisson";
  return s;
}

void McConfig::validate() const {
  if (n_realizations < 2) throw ConfigError("n_realizations must be >= 2");
  if (!(domain.x1 > domain.x0 && domain.y1 > domain.y0)) throw ConfigError("empty domain");
  if (!(spacing > 0) || !(dt > 0)) throw ConfigError("spacing and dt must be positive");
  if (source.kind == SourceKind::window && !source.window) throw ConfigError("window source without window");
  if (source.kind == SourceKind::gef_series && source.plane != Plane::gwhf)
    throw ConfigError("series GEF lives in the GWHF plane");
  Complex c = disk_center();
  for (std::size_t i = 0; i < radii.size(); ++i) {
    double R = radii[i];
    if (!(R > 0)) throw ConfigError("radii must be positive");
    if (i > 0 && !(R > radii[i - 1])) throw ConfigError("radii must be sorted ascending");
    if (c.real() - R < domain.x0 || c.real() + R > domain.x1 || c.imag() - R < domain.y0 ||
        c.imag() + R > domain.y1)
      throw ConfigError("disk of radius " + fmt(R) + " does not fit the interior");
  }
}

nlohmann::json McConfig::to_json() const {
  nlohmann::json j;
  j["source"] = {{"kind", kind_name(source.kind)}, {"label", source.label}, {"plane", to_string(source.plane)}};
  if (source.window) j["source"]["window"] = source.window->spec;
  if (source.kind == SourceKind::polyentire) {
    j["source"]["q"] = source.q;
    j["source"]["poly"] = source.poly == PolyKind::pure ? "pure" : "full";
  }
  if (source.kind == SourceKind::poisson) {
    j["source"]["density"] = source.poisson_density;
    j["source"]["charge_density"] = source.poisson_charge_density;
  }
  if (source.kernel) j["source"]["kernel"] = source.kernel->name;
  j["domain"] = {domain.x0, domain.x1, domain.y0, domain.y1};
  j["spacing"] = spacing;
  j["dt"] = dt;
  j["pad_cells"] = pad_cells;
  j["n_realizations"] = n_realizations;
  char buf[32];
  std::snprintf(buf, sizeof buf, "0x%llX", static_cast<unsigned long long>(seed));
  j["seed"] = buf;
  j["radii"] = radii;
  Complex c = disk_center();
  j["center"] = {c.real(), c.imag()};
  j["convention"] = to_string(convention);
  return j;
}

bool McReport::gate(double limit) const {
  for (const auto& it : items)
    if (std::isfinite(it.z) && std::abs(it.z) > limit) return false;
  return true;
}

nlohmann::json McReport::to_json() const {
  nlohmann::json j;
  j["quantity"] = quantity;
  j["items"] = nlohmann::json::array();
  for (const auto& it : items)
    j["items"].push_back({{"label", it.label},
                          {"empirical", it.empirical},
                          {"se", it.se},
                          {"theory", num_or_null(it.theory)},
                          {"z", num_or_null(it.z)}});
  j["config"] = config;
  j["elapsed_s"] = elapsed_s;
  j["warnings"] = warnings;
  for (auto& [k, v] : extra.items()) j[k] = v;
  return j;
}

std::string McReport::to_csv() const {
  std::ostringstream os;
  os << "label,empirical,se,theory,z\n";
  char buf[160];
  for (const auto& it : items) {
    std::snprintf(buf, sizeof buf, ",%.10g,%.10g,%.10g,%.6g\n", it.empirical, it.se, it.theory, it.z);
    os << it.label << buf;
  }
  return os.str();
}

int resolve_threads(int requested) {
  if (const char* env = std::getenv("GWHF_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == 0 && v > 0) return static_cast<int>(v);
    throw ConfigError(std::string("GWHF_THREADS must be a positive integer, got '") + env + "'");
  }
  if (requested < 0) throw ConfigError("--threads must be >= 0");
  return requested;
}

Field simulate_realization(const McConfig& cfg, std::uint32_t r) {
  SimOptions opt;
  opt.spacing = cfg.spacing;
  opt.dt = cfg.dt;
  opt.seed = cfg.seed;
  opt.realization = r;
  opt.pad_cells = cfg.pad_cells;
  const McSource& src = cfg.source;
  switch (src.kind) {
    case SourceKind::window:
      if (src.plane == Plane::stft) return stft_field(*src.window, cfg.domain, opt);
      return stft_field_gwhf(*src.window, cfg.domain, opt);
    case SourceKind::gef_series:
      return gef_series_field(cfg.domain, opt, cfg.gef_terms);
    case SourceKind::polyentire:
      return polyentire_field(src.q, src.poly, cfg.domain, opt);
    case SourceKind::poisson:
      break;
  }
  throw ConfigError("poisson control has no field");
}

RealizationSummary summarize_realization(const McConfig& cfg, std::uint32_t r) {
  if (cfg.source.kind == SourceKind::poisson) return poisson_realization(cfg, r);
  Field f = simulate_realization(cfg, r);
  ZeroSet zs = detect_zeros(f.grid, &f.eval);
  RealizationSummary s;
  for (const auto& z : zs.zeros) {
    if (z.degenerate || !cfg.domain.contains(z.position)) continue;
    ++s.count;
    s.charge += z.charge;
  }
  s.degenerate = zs.degenerate;
  s.mismatches = zs.mismatches;
  s.fallbacks = zs.fallbacks;
  s.subdivided = zs.subdivided;
  if (!cfg.radii.empty()) {
    for (const auto& d : disk_stats(zs.zeros, cfg.disk_center(), cfg.radii, cfg.domain)) {
      s.disk_count.push_back(d.count);
      s.disk_charge.push_back(d.total_charge);
    }
  }
  return s;
}

std::vector<RealizationSummary> run_realizations(const McConfig& cfg) {
  cfg.validate();
  const int n = cfg.n_realizations;
  std::vector<RealizationSummary> out(n);
  std::vector<std::exception_ptr> errs(n);
  int threads = resolve_threads(cfg.threads);
#ifdef _OPENMP
  if (threads <= 0) threads = omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
#endif
  for (int r = 0; r < n; ++r) {
    try {
      out[r] = summarize_realization(cfg, static_cast<std::uint32_t>(r));
    } catch (...) {
      errs[r] = std::current_exception();
    }
  }
  (void)threads;
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
  return out;
}

double theory_density(const McConfig& cfg) { return theory_density(cfg, cfg.convention); }

double theory_density(const McConfig& cfg, OmegaConvention conv) {
  const McSource& s = cfg.source;
  switch (s.kind) {
    case SourceKind::window: {
      double rho = rho1_stft(*s.window, conv);
      return s.plane == Plane::stft ? rho : rho / pi;
    }
    case SourceKind::gef_series: return 1 / pi;
    case SourceKind::polyentire: return rho1_radial(*s.kernel);
    case SourceKind::poisson: return s.poisson_density;
  }
  return kNaN;
}

double theory_charge_density(const McConfig& cfg) {
  if (cfg.source.kind == SourceKind::poisson) return cfg.source.poisson_charge_density;
  return cfg.source.plane == Plane::stft ? 1.0 : 1 / pi;
}

double theory_charge_variance(const McConfig& cfg, double R) {
  const McSource& s = cfg.source;
  if (s.kind == SourceKind::poisson) return s.poisson_density * pi * R * R;
  if (!s.kernel) return kNaN;
  double scale = s.plane == Plane::stft ? std::sqrt(pi) : 1.0;
  return charge_variance(*s.kernel, scale * R);
}

double theory_variance_asymptote(const McConfig& cfg) {
  const McSource& s = cfg.source;
  if (s.kind == SourceKind::poisson || !s.kernel) return kNaN;
  double scale = s.plane == Plane::stft ? std::sqrt(pi) : 1.0;
  return scale * variance_asymptote(*s.kernel);
}

namespace {

void add_detector_stats(McReport& rep, const std::vector<RealizationSummary>& s) {
  long long zeros = 0, deg = 0, mis = 0, fb = 0, sub = 0;
  for (const auto& r : s) {
    zeros += r.count;
    deg += r.degenerate;
    mis += r.mismatches;
    fb += r.fallbacks;
    sub += r.subdivided;
  }
  rep.extra["detector"] = {{"zeros", zeros},      {"degenerate", deg},  {"mismatches", mis},
                           {"fallbacks", fb},     {"subdivided", sub}};
}

}  // namespace

McReport intensity_report(const McConfig& cfg, const std::vector<RealizationSummary>& s) {
  McReport rep;
  rep.quantity = "density";
  rep.config = report_config(cfg);
  std::vector<long long> counts;
  for (const auto& r : s) counts.push_back(r.count);
  Moments m = moments(counts);
  double area = cfg.domain.area();
  rep.items.push_back(make_item("density", m.mean / area, m.se_mean / area, theory_density(cfg)));
  rep.extra["mean_count"] = m.mean;
  rep.extra["expected_count"] = theory_density(cfg) * area;
  if (cfg.source.kind == SourceKind::window) {
    double a = theory_density(cfg, OmegaConvention::regression);
    double b = theory_density(cfg, OmegaConvention::intro);
    if (std::abs(a - b) > 1e-12 * std::abs(a)) {
      auto za = make_item("", m.mean / area, m.se_mean / area, a).z;
      auto zb = make_item("", m.mean / area, m.se_mean / area, b).z;
      rep.extra["conventions"] = {{"regression", {{"theory", a}, {"z", za}}},
                                  {"intro", {{"theory", b}, {"z", zb}}}};
    }
  }
  add_detector_stats(rep, s);
  return rep;
}

McReport charge_report(const McConfig& cfg, const std::vector<RealizationSummary>& s) {
  McReport rep;
  rep.quantity = "charge_density";
  rep.config = report_config(cfg);
  std::vector<long long> charges, counts;
  for (const auto& r : s) {
    charges.push_back(r.charge);
    counts.push_back(r.count);
  }
  Moments m = moments(charges);
  double area = cfg.domain.area();
  rep.items.push_back(
      make_item("charge_density", m.mean / area, m.se_mean / area, theory_charge_density(cfg)));
  rep.extra["mean_charge"] = m.mean;
  rep.extra["mean_count"] = moments(counts).mean;
  add_detector_stats(rep, s);
  return rep;
}

McReport variance_report(const McConfig& cfg, const std::vector<RealizationSummary>& s) {
  McReport rep;
  rep.quantity = "charge_variance";
  rep.config = report_config(cfg);
  const std::size_t nr = cfg.radii.size();
  if (nr == 0) throw ConfigError("charge variance needs a list of radii");
  if (s.size() < 100)
    rep.warnings.push_back("fewer than 100 realizations: the standard error of a variance is chi-square wide");

  std::vector<Moments> mom(nr);
  std::vector<std::vector<long long>> samples(nr);
  for (std::size_t k = 0; k < nr; ++k) {
    for (const auto& r : s) samples[k].push_back(r.disk_charge.at(k));
    mom[k] = moments(samples[k]);
  }

  double asym = theory_variance_asymptote(cfg);
  nlohmann::json table = nlohmann::json::array();
  for (std::size_t k = 0; k < nr; ++k) {
    double R = cfg.radii[k];
    double th = theory_charge_variance(cfg, R);
    rep.items.push_back(make_item("var[R=" + fmt(R) + "]", mom[k].var, mom[k].se_var, th));
    table.push_back({{"R", R},
                     {"mean_charge", mom[k].mean},
                     {"var", mom[k].var},
                     {"se", mom[k].se_var},
                     {"var_over_R", mom[k].var / R},
                     {"se_over_R", mom[k].se_var / R},
                     {"theory_var", num_or_null(th)},
                     {"asymptote", num_or_null(asym)}});
  }
  rep.extra["table"] = table;

  // weighted fit Var = a + b R on the upper half of the radii
  std::size_t k0 = nr / 2;
  if (nr - k0 >= 2) {
    KahanSum sw, swx, swy, swxx, swxy;
    for (std::size_t k = k0; k < nr; ++k) {
      double w = mom[k].se_var > 0 ? 1 / (mom[k].se_var * mom[k].se_var) : 1.0;
      double x = cfg.radii[k], y = mom[k].var;
      sw.add(w);
      swx.add(w * x);
      swy.add(w * y);
      swxx.add(w * x * x);
      swxy.add(w * x * y);
    }
    double det = sw.value() * swxx.value() - swx.value() * swx.value();
    double b = (sw.value() * swxy.value() - swx.value() * swy.value()) / det;
    double a = (swy.value() - b * swx.value()) / sw.value();
    double se_b = std::sqrt(sw.value() / det);
    nlohmann::json fit = {{"slope", b}, {"intercept", a}, {"slope_se", se_b},
                          {"radii", std::vector<double>(cfg.radii.begin() + k0, cfg.radii.end())}};
    if (std::isfinite(asym)) {
      fit["asymptote"] = asym;
      fit["z"] = (b - asym) / se_b;
    }
    rep.extra["fit"] = fit;
  }

  // Var(Rmax) / Var(Rmax/2) with jackknife SE
  double rmax = cfg.radii.back();
  std::size_t kh = nr;
  for (std::size_t k = 0; k < nr; ++k)
    if (std::abs(cfg.radii[k] - rmax / 2) < 1e-9) kh = k;
  if (kh < nr && mom[kh].var > 0) {
    auto top = leave_one_out_var(samples[nr - 1]);
    auto half = leave_one_out_var(samples[kh]);
    double n = static_cast<double>(s.size());
    double ratio = mom[nr - 1].var / mom[kh].var;
    KahanSum mean_s;
    std::vector<double> th(top.size());
    for (std::size_t i = 0; i < top.size(); ++i) {
      th[i] = top[i] / half[i];
      mean_s.add(th[i]);
    }
    double mean = mean_s.value() / n;
    KahanSum dev;
    for (double t : th) dev.add((t - mean) * (t - mean));
    double se = std::sqrt((n - 1) / n * dev.value());
    nlohmann::json rj = {{"R", rmax}, {"R_half", cfg.radii[kh]}, {"ratio", ratio}, {"se", se}};
    double tr = theory_charge_variance(cfg, rmax) / theory_charge_variance(cfg, cfg.radii[kh]);
    if (std::isfinite(tr)) rj["theory"] = tr;
    rep.extra["ratio"] = rj;
  }
  add_detector_stats(rep, s);
  return rep;
}

namespace {

template <class F>
McReport timed(const McConfig& cfg, F report) {
  auto t0 = std::chrono::steady_clock::now();
  auto s = run_realizations(cfg);
  McReport rep = report(cfg, s);
  rep.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace

McReport estimate_intensity(const McConfig& cfg) { return timed(cfg, intensity_report); }
McReport estimate_charge_intensity(const McConfig& cfg) { return timed(cfg, charge_report); }

McReport estimate_charge_variance(const McConfig& cfg) {
  if (cfg.radii.empty()) throw ConfigError("charge variance needs a list of radii");
  return timed(cfg, variance_report);
}

}  // namespace gwhf
