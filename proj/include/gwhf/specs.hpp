#pragma once

#include <optional>
#include <string>

#include "gwhf/kernel.hpp"
#include "gwhf/window.hpp"
#include "json.hpp"

namespace gwhf {

/// Parsed kernel record {"family", "q" | "r", "jet", "profile"}.
struct KernelSpec {
  std::string family;
  nlohmann::json json;
  std::optional<RadialKernel> radial;  // absent for jet-only custom kernels
  KernelJet jet;
  int order = 0;  // r for laguerre, q for laguerre-avg
};

KernelSpec parse_kernel_spec(const nlohmann::json& j);
/// gef | laguerre:r | laguerre-avg:q | exp:a | rational:a,n | JSON text | path to a JSON file
KernelSpec parse_kernel_arg(const std::string& s);

Window parse_window_spec(const nlohmann::json& j);
/// hermite:r | gaussian:sigma,phase,x0,xi0,xi1 | mixture:re,im;re,im;... |
/// samples:path,dt | JSON text | path to a JSON file
Window parse_window_arg(const std::string& s);

/// Loads a JSON document from text or from a file path.
nlohmann::json load_json_arg(const std::string& s);

}  // namespace gwhf
