#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gwhf/kernel.hpp"
#include "gwhf/mc.hpp"
#include "gwhf/simulate.hpp"
#include "gwhf/specs.hpp"
#include "gwhf/window.hpp"
#include "gwhf/zeros.hpp"

namespace py = pybind11;
using namespace gwhf;

namespace {

py::object to_py(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

Domain to_domain(const std::array<double, 4>& d) { return {d[0], d[1], d[2], d[3]}; }

SimOptions sim_options(double spacing, double dt, std::uint64_t seed, std::uint32_t realization) {
  SimOptions o;
  o.spacing = spacing;
  o.dt = dt;
  o.seed = seed;
  o.realization = realization;
  return o;
}

py::array_t<Complex> grid_values(const FieldGrid& g) {
  py::array_t<Complex> a({g.ny, g.nx});
  std::copy(g.values.begin(), g.values.end(), a.mutable_data());
  return a;
}

py::dict zeros_dict(const ZeroSet& zs) {
  const auto n = static_cast<py::ssize_t>(zs.zeros.size());
  py::array_t<Complex> pos(n);
  py::array_t<int> charge(n), winding(n), jac(n);
  py::array_t<bool> refined(n);
  for (py::ssize_t i = 0; i < n; ++i) {
    const auto& z = zs.zeros[i];
    pos.mutable_at(i) = z.position;
    charge.mutable_at(i) = z.charge;
    winding.mutable_at(i) = z.winding;
    jac.mutable_at(i) = z.jacobian_sign;
    refined.mutable_at(i) = z.refined;
  }
  py::dict d;
  d["position"] = pos;
  d["charge"] = charge;
  d["winding"] = winding;
  d["jacobian_sign"] = jac;
  d["refined"] = refined;
  d["degenerate"] = zs.degenerate;
  d["mismatches"] = zs.mismatches;
  d["fallbacks"] = zs.fallbacks;
  d["subdivided"] = zs.subdivided;
  return d;
}

McConfig mc_config(const std::string& source, std::optional<std::array<double, 4>> domain, std::optional<double> spacing,
                   int n, std::uint64_t seed, std::vector<double> radii, int threads, const std::string& convention) {
  McConfig c;
  // "poisson:density,charge" | kernel arguments | window arguments
  if (source.rfind("poisson:", 0) == 0) {
    double dens = 0, chg = 0;
    if (std::sscanf(source.c_str() + 8, "%lf,%lf", &dens, &chg) != 2)
      throw ConfigError("poisson source wants 'poisson:density,charge_density'");
    c.source = source_poisson(dens, chg);
  } else {
    try {
      c.source = source_from_kernel(parse_kernel_arg(source));
    } catch (const Error&) {
      c.source = source_from_window(parse_window_arg(source));
    }
  }
  if (c.source.plane == Plane::gwhf) {
    c.domain = {-6.25, 6.25, -6.25, 6.25};
    c.spacing = 1.0 / 16;
  }
  if (domain) c.domain = to_domain(*domain);
  if (spacing) c.spacing = *spacing;
  c.n_realizations = n;
  c.seed = seed;
  c.radii = std::move(radii);
  c.threads = threads;
  c.convention = parse_convention(convention);
  return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Zeros of Gaussian Weyl-Heisenberg functions: formulas, simulation, detection, Monte Carlo.";

  // base first: later registrations are tried first
  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", base);
  py::register_exception<InvalidKernel>(m, "InvalidKernel", base);
  py::register_exception<InvalidWindow>(m, "InvalidWindow", base);
  py::register_exception<DomainError>(m, "DomainError", base);
  py::register_exception<DecayViolation>(m, "DecayViolation", base);
  py::register_exception<ResolutionError>(m, "ResolutionError", base);

  m.attr("default_seed") = default_seed;

  py::class_<UncertaintyConstants>(m, "UncertaintyConstants")
      .def_readonly("c1", &UncertaintyConstants::c1)
      .def_readonly("c2", &UncertaintyConstants::c2)
      .def_readonly("c3", &UncertaintyConstants::c3)
      .def_readonly("c4", &UncertaintyConstants::c4)
      .def_readonly("c5", &UncertaintyConstants::c5)
      .def("__repr__", [](const UncertaintyConstants& c) {
        return "UncertaintyConstants(c1=" + std::to_string(c.c1) + ", c2=" + std::to_string(c.c2) +
               ", c3=" + std::to_string(c.c3) + ", c4=" + std::to_string(c.c4) + ", c5=" + std::to_string(c.c5) + ")";
      });

  py::class_<KernelJet>(m, "KernelJet")
      .def_readonly("b10", &KernelJet::b10)
      .def_readonly("b01", &KernelJet::b01)
      .def_readonly("h20", &KernelJet::h20)
      .def_readonly("h02", &KernelJet::h02)
      .def_readonly("h11", &KernelJet::h11);

  py::class_<Window>(m, "Window")
      .def(py::init(&parse_window_arg), py::arg("spec"),
           "hermite:r | gaussian:sigma,phase,x0,xi0,xi1 | mixture:re,im;... | samples:path,dt | JSON")
      .def_readonly("label", &Window::label)
      .def_readonly("support_radius", &Window::support_radius)
      .def("__call__", [](const Window& g, double t) { return g(t); })
      .def("constants", [](const Window& g) { return uncertainty_constants(g); })
      .def("jet", [](const Window& g) { return jet_from_constants(uncertainty_constants(g)); })
      .def(
          "rho1", [](const Window& g, const std::string& conv) { return rho1_stft(g, parse_convention(conv)); },
          py::arg("convention") = "regression", "zeros per unit area of the STFT of white noise")
      .def(
          "transformed",
          [](const Window& g, double x0, double xi0, double xi1) { return transform_window(g, x0, xi0, xi1); },
          py::arg("x0"), py::arg("xi0"), py::arg("xi1"))
      .def("ambiguity", [](const Window& g, double a, double b) { return ambiguity(g, a, b); });

  py::class_<KernelSpec>(m, "Kernel")
      .def(py::init(&parse_kernel_arg), py::arg("spec"),
           "gef | laguerre:r | laguerre-avg:q | exp:a | rational:a,n | JSON")
      .def_readonly("family", &KernelSpec::family)
      .def_readonly("jet", &KernelSpec::jet)
      .def(
          "rho1", [](const KernelSpec& k, const std::string& conv) { return rho1(k.jet, parse_convention(conv)); },
          py::arg("convention") = "regression")
      .def("delta_h", [](const KernelSpec& k) { return delta_h(k.jet); })
      .def("profile", [](const KernelSpec& k, double t) { return k.radial.value().p(t); })
      .def("variance_asymptote", [](const KernelSpec& k) { return variance_asymptote(k.radial.value()); })
      .def("charge_variance", [](const KernelSpec& k, double R) { return charge_variance(k.radial.value(), R); })
      .def("i_prime", [](const KernelSpec& k, double s) { return i_prime(k.radial.value(), s); })
      .def("tau2", [](const KernelSpec& k, double d) { return tau2_charged(k.radial.value(), d); })
      .def("wick_oracle",
           [](const KernelSpec& k, Complex z, Complex w) { return wick_oracle_E(k.radial.value(), z, w); });

  m.def("rho1_charged", &rho1_charged);

  py::class_<Field>(m, "Field")
      .def_property_readonly("values", [](const Field& f) { return grid_values(f.grid); })
      .def_property_readonly("origin", [](const Field& f) { return f.grid.origin; })
      .def_property_readonly("spacing", [](const Field& f) { return f.grid.spacing; })
      .def_property_readonly("plane", [](const Field& f) { return std::string(to_string(f.grid.plane)); })
      .def_property_readonly("interior",
                             [](const Field& f) {
                               const auto& d = f.grid.interior;
                               return std::array<double, 4>{d.x0, d.x1, d.y0, d.y1};
                             })
      .def("__call__", [](const Field& f, Complex z) { return f.eval(z); })
      .def(
          "zeros",
          [](const Field& f, bool resample) {
            py::gil_scoped_release nogil;
            auto zs = detect_zeros(f.grid, resample ? &f.eval : nullptr);
            py::gil_scoped_acquire gil;
            return zeros_dict(zs);
          },
          py::arg("resample") = true)
      .def("to_gwhf_plane", [](const Field& f) { return to_gwhf_plane(f); });

  m.def(
      "stft_field",
      [](const Window& g, std::array<double, 4> domain, double spacing, double dt, std::uint64_t seed,
         std::uint32_t realization) {
        py::gil_scoped_release nogil;
        return stft_field(g, to_domain(domain), sim_options(spacing, dt, seed, realization));
      },
      py::arg("window"), py::arg("domain") = std::array<double, 4>{0, 8, 0, 8}, py::arg("spacing") = 1.0 / 32,
      py::arg("dt") = 1.0 / 64, py::arg("seed") = default_seed, py::arg("realization") = 0);

  m.def(
      "gef_field",
      [](std::array<double, 4> domain, double spacing, std::uint64_t seed, std::uint32_t realization, int n_terms) {
        py::gil_scoped_release nogil;
        return gef_series_field(to_domain(domain), sim_options(spacing, 1.0 / 64, seed, realization), n_terms);
      },
      py::arg("domain") = std::array<double, 4>{-6.25, 6.25, -6.25, 6.25}, py::arg("spacing") = 1.0 / 16,
      py::arg("seed") = default_seed, py::arg("realization") = 0, py::arg("n_terms") = 0);

  m.def(
      "polyentire_field",
      [](int q, const std::string& kind, std::array<double, 4> domain, double spacing, std::uint64_t seed,
         std::uint32_t realization) {
        PolyKind k = parse_poly_kind(kind);
        py::gil_scoped_release nogil;
        return polyentire_field(q, k, to_domain(domain), sim_options(spacing, 1.0 / 64, seed, realization));
      },
      py::arg("q"), py::arg("kind") = "pure", py::arg("domain") = std::array<double, 4>{-6.25, 6.25, -6.25, 6.25},
      py::arg("spacing") = 1.0 / 16, py::arg("seed") = default_seed, py::arg("realization") = 0);

  m.def(
      "monte_carlo",
      [](const std::string& quantity, const std::string& source, std::optional<std::array<double, 4>> domain,
         std::optional<double> spacing, int n, std::uint64_t seed, std::vector<double> radii, int threads,
         const std::string& convention) {
        McConfig c = mc_config(source, domain, spacing, n, seed, std::move(radii), threads, convention);
        McReport r;
        {
          py::gil_scoped_release nogil;
          if (quantity == "density")
            r = estimate_intensity(c);
          else if (quantity == "charge_density")
            r = estimate_charge_intensity(c);
          else if (quantity == "charge_variance")
            r = estimate_charge_variance(c);
          else
            throw ConfigError("quantity must be density, charge_density or charge_variance");
        }
        return to_py(r.to_json());
      },
      py::arg("quantity"), py::arg("source"), py::arg("domain") = py::none(), py::arg("spacing") = py::none(),
      py::arg("n") = 200, py::arg("seed") = default_seed, py::arg("radii") = std::vector<double>{},
      py::arg("threads") = 0, py::arg("convention") = "regression",
      "Report as a dict; source is a window, a kernel, or 'poisson:density,charge_density'.");
}
