#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "gwhf/grid_io.hpp"
#include "gwhf/kernel.hpp"
#include "gwhf/mc.hpp"
#include "gwhf/simulate.hpp"
#include "gwhf/specs.hpp"
#include "gwhf/window.hpp"
#include "gwhf/zeros.hpp"
#include "json.hpp"
#include "svg_plot.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace gwhf;

namespace {

// exit codes
constexpr int kGateFailed = 1;
constexpr int kBadInput = 2;
constexpr int kNumerical = 3;

struct Options {
  std::string window, kernel, plane = "auto", domain, radii, center, seed = "0xC0FFEE";
  std::string convention = "regression", out = ".";
  double poisson = 0, poisson_charge = 0, spacing = 0, dt = 1.0 / 64;
  int n = 200, threads = 0, realization = 0, pad = 3, gef_terms = 0, draws = 50;
  bool no_timing = false, csv = false, no_eval = false;
};

std::uint64_t parse_seed(const std::string& s) {
  if (s == "random") {
    std::random_device rd;
    return (std::uint64_t(rd()) << 32) ^ rd();
  }
  try {
    std::size_t pos = 0;
    auto v = std::stoull(s, &pos, 0);
    if (pos == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError("--seed must be an integer (decimal or 0x hex) or 'random', got '" + s + "'");
}

std::vector<double> parse_list(const std::string& s, const char* what) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t pos = 0;
      v.push_back(std::stod(tok, &pos));
      if (pos != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ConfigError(std::string(what) + ": cannot parse '" + tok + "' as a number");
    }
  }
  return v;
}

Domain parse_domain(const std::string& s) {
  auto v = parse_list(s, "--domain");
  if (v.size() != 4) throw ConfigError("--domain takes x0,x1,y0,y1");
  return {v[0], v[1], v[2], v[3]};
}

void add_source_options(CLI::App* c, Options& o) {
  c->add_option("--window", o.window, "hermite:r | gaussian:s,phase,x0,xi0,xi1 | mixture:re,im;... | samples:path,dt | JSON");
  c->add_option("--kernel", o.kernel, "gef | laguerre:r | laguerre-avg:q | exp:a | rational:a,n | JSON");
}

void add_sim_options(CLI::App* c, Options& o) {
  c->add_option("--poisson", o.poisson, "Poisson control with this density (points per unit area)");
  c->add_option("--poisson-charge", o.poisson_charge, "mean signed charge per unit area of the Poisson control");
  c->add_option("--plane", o.plane, "stft | gwhf (windows default to stft, kernels live in gwhf)");
  c->add_option("--domain", o.domain, "x0,x1,y0,y1 (default 0,8,0,8 in stft, -6.25,6.25,-6.25,6.25 in gwhf)");
  c->add_option("--spacing", o.spacing, "grid spacing (default 1/32 in stft, 1/16 in gwhf)");
  c->add_option("--dt", o.dt, "time step of the discretized white noise")->capture_default_str();
  c->add_option("--pad", o.pad, "lattice cells kept outside the domain")->capture_default_str();
  c->add_option("--gef-terms", o.gef_terms, "series terms for the GEF (0: smallest safe number)");
  c->add_option("--seed", o.seed, "64-bit seed, decimal or 0x hex, or 'random'")->capture_default_str();
  c->add_option("--convention", o.convention, "regression | intro")->capture_default_str();
}

McConfig build_config(const Options& o, bool variance) {
  int sources = !o.window.empty() + !o.kernel.empty() + (o.poisson > 0);
  if (sources != 1) throw ConfigError("give exactly one of --window, --kernel, --poisson");
  McConfig cfg;
  if (!o.window.empty()) {
    Plane plane = o.plane == "gwhf" ? Plane::gwhf : Plane::stft;
    if (o.plane != "auto" && o.plane != "stft" && o.plane != "gwhf")
      throw ConfigError("--plane must be stft or gwhf");
    cfg.source = source_from_window(parse_window_arg(o.window), plane);
  } else if (!o.kernel.empty()) {
    if (o.plane == "stft") throw ConfigError("kernel sources live in the gwhf plane");
    cfg.source = source_from_kernel(parse_kernel_arg(o.kernel));
  } else {
    cfg.source = source_poisson(o.poisson, o.poisson_charge);
    if (o.plane == "stft") cfg.source.plane = Plane::stft;
  }
  const bool stft = cfg.source.plane == Plane::stft;
  cfg.domain = o.domain.empty() ? (stft ? Domain{0, 8, 0, 8} : Domain{-6.25, 6.25, -6.25, 6.25})
                                : parse_domain(o.domain);
  cfg.spacing = o.spacing > 0 ? o.spacing : (stft ? 1.0 / 32 : 1.0 / 16);
  cfg.dt = o.dt;
  cfg.pad_cells = o.pad;
  cfg.n_realizations = o.n;
  cfg.seed = parse_seed(o.seed);
  cfg.threads = o.threads;
  cfg.convention = parse_convention(o.convention);
  cfg.gef_terms = o.gef_terms;
  if (!o.center.empty()) {
    auto c = parse_list(o.center, "--center");
    if (c.size() != 2) throw ConfigError("--center takes x,y");
    cfg.center = Complex(c[0], c[1]);
  }
  if (!o.radii.empty()) {
    cfg.radii = parse_list(o.radii, "--radii");
  } else if (variance) {
    // largest disks that fit, in steps of 1 (gwhf) or 1/2 (stft)
    double step = stft ? 0.5 : 1.0;
    Complex c = cfg.disk_center();
    double rmax = std::min({c.real() - cfg.domain.x0, cfg.domain.x1 - c.real(), c.imag() - cfg.domain.y0,
                            cfg.domain.y1 - c.imag()});
    for (double R = step; R <= rmax + 1e-12; R += step) cfg.radii.push_back(R);
  }
  cfg.validate();
  return cfg;
}

void write_text(const fs::path& p, const std::string& text) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot write '" + p.string() + "'");
  out << text;
}

json try_value(const std::function<double()>& f) {
  try {
    return f();
  } catch (const Error& e) {
    return json{{"error", e.what()}};
  }
}

json jet_json(const KernelJet& j) {
  return {{"b10", j.b10}, {"b01", j.b01}, {"h20", j.h20}, {"h02", j.h02}, {"h11", j.h11}};
}

// ---- intensity -----------------------------------------------------------

int cmd_intensity(const Options& o) {
  if (o.window.empty() == o.kernel.empty()) throw ConfigError("give exactly one of --window, --kernel");
  const auto conv = parse_convention(o.convention);
  json out;
  if (!o.window.empty()) {
    Window g = parse_window_arg(o.window);
    auto c = uncertainty_constants(g);
    out["window"] = g.spec;
    out["c1"] = c.c1;
    out["c2"] = c.c2;
    out["c3"] = c.c3;
    out["c4"] = c.c4;
    out["c5"] = c.c5;
    out["norm"] = c.norm;
    out["convention"] = to_string(conv);
    out["discriminant"] = stft_discriminant(c, conv);
    double rho = rho1_stft(c, conv);
    out["rho1_stft"] = rho;
    out["rho1_stft_via_jet"] = rho1_stft_via_jet(c, conv);
    out["rho1_gwhf"] = rho / pi;
    out["rho1_charged_stft"] = 1.0;
    out["jet"] = jet_json(jet_from_constants(c));
    double dr = stft_discriminant(c, OmegaConvention::regression);
    double di = stft_discriminant(c, OmegaConvention::intro);
    if (dr != di) {
      for (auto cv : {OmegaConvention::regression, OmegaConvention::intro})
        out["conventions"][to_string(cv)] = {{"discriminant", stft_discriminant(c, cv)},
                                             {"rho1_stft", try_value([&] { return rho1_stft(c, cv); })}};
    }
  } else {
    KernelSpec k = parse_kernel_arg(o.kernel);
    out["kernel"] = k.json;
    out["jet"] = jet_json(k.jet);
    ValidationReport rep = k.radial ? validate_kernel(*k.radial) : validate_kernel(k.jet, conv);
    if (!rep.ok()) {
      std::string msg = "kernel fails validation:";
      for (const auto& v : rep.violations) msg += "\n  " + v.predicate + ": " + v.detail;
      throw InvalidKernel(msg);
    }
    out["convention"] = to_string(conv);
    out["delta_h"] = delta_h(k.jet, conv);
    out["rho1"] = k.radial ? rho1_radial(*k.radial) : rho1(k.jet, conv);
    out["rho1_charged"] = rho1_charged();
    if (k.jet.b10 * k.jet.b01 != 0) {
      for (auto cv : {OmegaConvention::regression, OmegaConvention::intro})
        out["conventions"][to_string(cv)] = {{"delta_h", try_value([&] { return delta_h(k.jet, cv); })},
                                             {"rho1", try_value([&] { return rho1(k.jet, cv); })}};
    }
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

// ---- variance-asymptote ----------------------------------------------------

int cmd_variance(const Options& o) {
  if (o.kernel.empty()) throw ConfigError("--kernel is required");
  KernelSpec k = parse_kernel_arg(o.kernel);
  if (!k.radial) throw ConfigError("the variance asymptote needs a radial profile, not a bare jet");
  json out;
  out["kernel"] = k.json;
  out["variance_asymptote"] = variance_asymptote(*k.radial);
  out["perimeter_integral"] = perimeter_integral(*k.radial);
  std::cout << out.dump(2) << "\n";
  return 0;
}

// ---- simulate / zeros ------------------------------------------------------

json cli_meta(const Options& o, const McConfig& cfg) {
  json m = {{"plane", to_string(cfg.source.plane)},
            {"domain", {cfg.domain.x0, cfg.domain.x1, cfg.domain.y0, cfg.domain.y1}},
            {"spacing", cfg.spacing},
            {"dt", cfg.dt},
            {"pad", cfg.pad_cells},
            {"gef_terms", cfg.gef_terms},
            {"seed", cfg.seed},
            {"realization", o.realization}};
  if (!o.window.empty()) m["window"] = o.window;
  if (!o.kernel.empty()) m["kernel"] = o.kernel;
  return m;
}

int cmd_simulate(const Options& o) {
  if (o.poisson > 0) throw ConfigError("the Poisson control has no field to simulate");
  Options oo = o;
  oo.n = 2;
  McConfig cfg = build_config(oo, false);
  Field f = simulate_realization(cfg, static_cast<std::uint32_t>(o.realization));
  f.grid.meta["cli"] = cli_meta(o, cfg);
  fs::path dir(o.out);
  fs::create_directories(dir);
  write_grid((dir / "grid.bin").string(), f.grid);
  if (o.csv) write_grid_csv((dir / "grid.csv").string(), f.grid);
  json out = {{"grid", (dir / "grid.bin").string()},
              {"nx", f.grid.nx},
              {"ny", f.grid.ny},
              {"plane", to_string(f.grid.plane)},
              {"spacing", f.grid.spacing},
              {"seed", f.grid.seed},
              {"realization", f.grid.realization}};
  std::cout << out.dump(2) << "\n";
  return 0;
}

// Rebuilds the point evaluator of a grid written by `simulate`.
FieldEvaluator evaluator_for(const FieldGrid& g) {
  if (!g.meta.contains("cli")) return {};
  const json& m = g.meta["cli"];
  Options o;
  if (m.contains("window")) o.window = m["window"];
  if (m.contains("kernel")) o.kernel = m["kernel"];
  o.plane = m.at("plane");
  auto d = m.at("domain");
  o.domain = std::to_string(d[0].get<double>()) + "," + std::to_string(d[1].get<double>()) + "," +
             std::to_string(d[2].get<double>()) + "," + std::to_string(d[3].get<double>());
  o.spacing = m.at("spacing");
  o.dt = m.at("dt");
  o.pad = m.at("pad");
  o.gef_terms = m.at("gef_terms");
  o.seed = std::to_string(m.at("seed").get<std::uint64_t>());
  o.n = 2;
  McConfig cfg = build_config(o, false);
  cfg.domain = {d[0], d[1], d[2], d[3]};
  return simulate_realization(cfg, m.at("realization").get<std::uint32_t>()).eval;
}

int cmd_zeros(const Options& o, const std::string& grid_path) {
  FieldGrid g = read_grid(grid_path);
  FieldEvaluator ev = o.no_eval ? FieldEvaluator{} : evaluator_for(g);
  ZeroSet zs = detect_zeros(g, ev ? &ev : nullptr);
  fs::path dir(o.out);
  fs::create_directories(dir);
  write_zeros_csv((dir / "zeros.csv").string(), zs.zeros);
  int charge = 0, degenerate = 0;
  for (const auto& z : zs.zeros) {
    charge += z.charge;
    degenerate += z.degenerate;
  }
  json out = {{"zeros", (dir / "zeros.csv").string()},
              {"count", zs.zeros.size()},
              {"total_charge", charge},
              {"degenerate", zs.degenerate},
              {"mismatches", zs.mismatches},
              {"fallbacks", zs.fallbacks},
              {"subdivided", zs.subdivided},
              {"evaluator", static_cast<bool>(ev)}};
  std::cout << out.dump(2) << "\n";
  return 0;
}

// ---- verify ----------------------------------------------------------------

struct CheckItem {
  std::string label;
  double empirical, theory;
};

// deterministic suites: pass iff every |empirical - theory| <= tol
int emit_check(const Options& o, const std::string& name, const std::vector<CheckItem>& items, double tol,
               json config) {
  json j;
  j["quantity"] = name;
  j["tolerance"] = tol;
  j["config"] = std::move(config);
  j["items"] = json::array();
  double worst = 0;
  std::string csv = "label,empirical,theory,abs_error\n";
  char buf[200];
  for (const auto& it : items) {
    double e = std::abs(it.empirical - it.theory);
    worst = std::isnan(e) ? INFINITY : std::max(worst, e);
    j["items"].push_back({{"label", it.label}, {"empirical", it.empirical}, {"theory", it.theory}, {"abs_error", e}});
    std::snprintf(buf, sizeof buf, ",%.15g,%.15g,%.3e\n", it.empirical, it.theory, e);
    csv += it.label + buf;
  }
  bool pass = worst <= tol;
  j["max_abs_error"] = worst;
  j["pass"] = pass;
  fs::path dir(o.out);
  write_text(dir / (name + ".json"), j.dump(2) + "\n");
  write_text(dir / (name + ".csv"), csv);
  std::cout << j.dump(2) << "\n";
  return pass ? 0 : kGateFailed;
}

int verify_invariance(const Options& o) {
  Window g = parse_window_arg(o.window.empty() ? "hermite:1" : o.window);
  const auto conv = parse_convention(o.convention);
  Stream st{parse_seed(o.seed), 0, 0x494E56u};
  std::vector<CheckItem> items;
  for (int k = 0; k < o.draws; ++k) {
    auto u = st.uniforms(2 * k), v = st.uniforms(2 * k + 1);
    double x0 = 2 * u[0] - 1, xi0 = 2 * u[1] - 1, xi1 = 2 * v[0] - 1;
    auto [a, b] = invariance_check(g, x0, xi0, xi1, conv);
    char lab[96];
    std::snprintf(lab, sizeof lab, "x0=%.4f xi0=%.4f xi1=%.4f", x0, xi0, xi1);
    items.push_back({lab, b, a});
  }
  return emit_check(o, "invariance", items, 1e-7,
                    {{"window", g.spec}, {"draws", o.draws}, {"convention", to_string(conv)}, {"seed", o.seed}});
}

int verify_tau2(const Options& o) {
  KernelSpec k = parse_kernel_arg(o.kernel.empty() ? "gef" : o.kernel);
  if (!k.radial) throw ConfigError("tau2-oracle needs a radial kernel");
  const auto& p = *k.radial;
  std::vector<CheckItem> items;
  for (int i = 0; i < 40; ++i) {
    double d = 0.05 + (8 - 0.05) * i / 39.0;
    double P = p.p(d * d);
    char lab[32];
    std::snprintf(lab, sizeof lab, "d=%.4f", d);
    items.push_back({lab, wick_oracle_E(p, 0, d) / (1 - P * P) - 1, i_prime(p, d * d)});
  }
  return emit_check(o, "tau2_oracle", items, 1e-8, {{"kernel", k.json}});
}

int verify_mc(const Options& o, const std::string& suite) {
  McConfig cfg = build_config(o, suite == "charge-variance");
  McReport r = suite == "intensity" ? estimate_intensity(cfg)
               : suite == "charge"  ? estimate_charge_intensity(cfg)
                                    : estimate_charge_variance(cfg);
  if (o.no_timing) r.elapsed_s = 0;
  std::string name = suite == "intensity" ? "density" : suite == "charge" ? "charge_density" : "charge_variance";
  fs::path dir(o.out);
  write_text(dir / (name + ".json"), r.to_json().dump(2) + "\n");
  write_text(dir / (name + ".csv"), r.to_csv());
  std::cout << r.to_json().dump(2) << "\n";
  return r.gate(5) ? 0 : kGateFailed;
}

// ---- plot --------------------------------------------------------------------

int cmd_plot(const Options& o, const std::string& csv, const std::string& svg, const std::string& title) {
  auto zeros = read_zeros_csv(csv);
  cli::PlotOptions po;
  if (!o.domain.empty()) po.domain = parse_domain(o.domain);
  po.title = title;
  write_text(svg, cli::zeros_svg(zeros, po));
  int pos = 0;
  for (const auto& z : zeros) pos += z.charge > 0;
  std::cout << json{{"svg", svg}, {"marks", zeros.size()}, {"positive", pos}}.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "gwhf: zeros of Gaussian Weyl-Heisenberg functions and of STFTs of white noise.\n"
      "Default seed 0xC0FFEE; GWHF_THREADS overrides --threads. Exit codes: 0 ok, 1 verification\n"
      "gate failed, 2 invalid input, 3 numerical failure (decay, aliasing, unresolved zeros)."};
  app.require_subcommand(1);
  Options o;
  std::string grid_path, csv_path, svg_path, title;

  auto* inten = app.add_subcommand(
      "intensity",
      "First intensity of the zero set.\n"
      "  kernel:  rho1 = (Delta_H + 2) / (2 pi sqrt(Delta_H + 1)), Delta_H from the conditional\n"
      "           covariance Omega of (F10, F01) given F(0) = 0; charged intensity rho1# = 1/pi.\n"
      "           A radial kernel P(|z|^2) has the jet b10 = b01 = 0, h20 = h02 = 2P'(0), h11 = 0.\n"
      "  window:  rho1_stft = (4D + 1) / (4 sqrt(D)) with\n"
      "           D = (c2 - c1^2) c3 - c2 c4^2 - c5^2 + 2 s c1 c4 c5, s = +1 (regression) or -1 (intro),\n"
      "           c1 = int t|g|^2, c2 = int t^2|g|^2, c3 = int |g'|^2, c4 = Im int g conj(g'),\n"
      "           c5 = Im int t g conj(g'). Both conventions are printed when they differ.");
  add_source_options(inten, o);
  inten->add_option("--convention", o.convention, "regression | intro")->capture_default_str();

  auto* var = app.add_subcommand(
      "variance-asymptote",
      "lim Var[charge in B_R] / R = (2/pi) int_0^inf 2 r^2 P'(r^2)^2 / (1 - P(r^2)^2) dr for a radial\n"
      "kernel P(|z|^2); also prints the perimeter integral (half of it). Exit 3 if P does not decay.");
  var->add_option("--kernel", o.kernel, "gef | laguerre:r | laguerre-avg:q | exp:a | rational:a,n | JSON")->required();

  auto* sim = app.add_subcommand(
      "simulate",
      "One realization on a grid, written to OUT/grid.bin.\n"
      "  window:  V_g N(x, y) = sqrt(dt) sum_k N_k conj(g(k dt - x)) e^{-2 pi i k dt y} (stft plane),\n"
      "           or F(z) = e^{-ixy} V(conj(z)/sqrt(pi)) in the gwhf plane.\n"
      "  kernel:  gef series e^{-|z|^2/2} sum xi_n z^n / sqrt(n!); laguerre:r as the STFT of h_r;\n"
      "           laguerre-avg:q as q^{-1/2} sum_{k<q} of independent STFTs of h_k.");
  add_source_options(sim, o);
  add_sim_options(sim, o);
  sim->add_option("--realization", o.realization, "realization index")->capture_default_str();
  sim->add_option("--out", o.out, "output directory")->capture_default_str();
  sim->add_flag("--csv", o.csv, "also write OUT/grid.csv (x,y,re,im)");

  auto* zer = app.add_subcommand(
      "zeros",
      "Charged zeros of a grid: phase winding of each plaquette, Newton refinement on the local\n"
      "bicubic interpolant, charge = sgn det DF (sgn Im[V_x conj(V_y)] in stft coordinates).\n"
      "Writes OUT/zeros.csv with header x,y,charge,winding,refined.");
  zer->add_option("--grid", grid_path, "grid written by simulate")->required();
  zer->add_option("--out", o.out, "output directory")->capture_default_str();
  zer->add_flag("--no-eval", o.no_eval, "do not rebuild the point evaluator for local resampling");

  auto* ver = app.add_subcommand("verify", "Verification suites; the exit code reflects the gate.");
  ver->require_subcommand(1);
  std::vector<std::pair<std::string, CLI::App*>> suites;
  const std::pair<const char*, const char*> suite_help[] = {
      {"intensity", "mean zeros per unit area against rho1; gate |z| <= 5"},
      {"charge", "mean signed charge per unit area against 1 (stft) or 1/pi (gwhf); gate |z| <= 5"},
      {"charge-variance",
       "Var[charge in B_R] per radius against the exact finite-R variance\n"
       "  Var(R) = -(2/pi) int_0^{2R} I'(d^2) (pi R^2 - lens(d)) d dd + R^2 I(4R^2),\n"
       "plus Var/R, a weighted linear fit and Var(Rmax)/Var(Rmax/2); gate |z| <= 5"},
      {"invariance", "rho1_stft of g and of e^{2 pi i (xi0 t + xi1 t^2)} g(t - x0) agree within 1e-7"},
      {"tau2-oracle", "E/(1 - P^2) - 1 = I'(d^2) within 1e-8 on 40 separations, E from Gaussian\n"
                      "regression on the 6x6 covariance and Wick's formula"}};
  for (auto [name, help] : suite_help) {
    auto* s = ver->add_subcommand(name, help);
    add_source_options(s, o);
    add_sim_options(s, o);
    s->add_option("-n,--realizations", o.n, "number of realizations")->capture_default_str();
    s->add_option("--radii", o.radii, "comma-separated disk radii (charge-variance)");
    s->add_option("--center", o.center, "disk center x,y (default: domain center)");
    s->add_option("--threads", o.threads, "worker threads (0: OpenMP default); results do not depend on it");
    s->add_option("--draws", o.draws, "random draws (invariance)")->capture_default_str();
    s->add_option("--out", o.out, "output directory for the report JSON and CSV")->capture_default_str();
    s->add_flag("--no-timing", o.no_timing, "report elapsed_s = 0 for byte-identical output");
    suites.emplace_back(name, s);
  }

  auto* plot = app.add_subcommand("plot", "SVG scatter of charged zeros: + for charge +1, circles for -1.");
  plot->add_option("--zeros", csv_path, "zeros CSV")->required();
  plot->add_option("--out", svg_path, "output SVG")->required();
  plot->add_option("--domain", o.domain, "x0,x1,y0,y1 of the axes (default: bounding box)");
  plot->add_option("--title", title, "title text");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*inten) return cmd_intensity(o);
    if (*var) return cmd_variance(o);
    if (*sim) return cmd_simulate(o);
    if (*zer) return cmd_zeros(o, grid_path);
    if (*plot) return cmd_plot(o, csv_path, svg_path, title);
    for (auto& [name, s] : suites) {
      if (!*s) continue;
      if (name == "invariance") return verify_invariance(o);
      if (name == "tau2-oracle") return verify_tau2(o);
      return verify_mc(o, name);
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  } catch (const InvalidKernel& e) {
    std::cerr << "invalid kernel: " << e.what() << "\n";
    return kBadInput;
  } catch (const InvalidWindow& e) {
    std::cerr << "invalid window: " << e.what() << "\n";
    return kBadInput;
  } catch (const DecayViolation& e) {
    std::cerr << "decay violation: " << e.what() << "\n";
    return kNumerical;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumerical;
  } catch (const json::exception& e) {
    std::cerr << "malformed JSON: " << e.what() << "\n";
    return kBadInput;
  }
  return 0;
}
