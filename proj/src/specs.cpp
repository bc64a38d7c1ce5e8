#include "gwhf/specs.hpp"

#include <fstream>
#include <sstream>
#include <vector>

namespace gwhf {

namespace {

std::vector<double> split_numbers(const std::string& s, char sep) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("'" + item + "' is not a number");
    }
  }
  return out;
}

int as_int(const std::string& s, const std::string& what) {
  auto v = split_numbers(s, ',');
  if (v.size() != 1 || v[0] != static_cast<int>(v[0]))
    throw ConfigError(what + " expects an integer, got '" + s + "'");
  return static_cast<int>(v[0]);
}

std::pair<std::string, std::string> split_head(const std::string& s) {
  auto c = s.find(':');
  if (c == std::string::npos) return {s, ""};
  return {s.substr(0, c), s.substr(c + 1)};
}

bool looks_like_json(const std::string& s) {
  auto p = s.find_first_not_of(" \t\n");
  return p != std::string::npos && s[p] == '{';
}

RadialKernel profile_kernel(const nlohmann::json& p) {
  std::string type = p.at("type").get<std::string>();
  if (type == "exp") return exp_kernel(p.at("a").get<double>());
  if (type == "rational") return rational_kernel(p.at("a").get<double>(), p.at("n").get<int>());
  if (type == "gef") return gef_kernel();
  throw ConfigError("unknown kernel profile type '" + type + "' (expected exp|rational)");
}

}  // namespace

nlohmann::json load_json_arg(const std::string& s) {
  try {
    if (looks_like_json(s)) return nlohmann::json::parse(s);
    std::ifstream in(s);
    if (!in) throw ConfigError("cannot open '" + s + "'");
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("invalid JSON in '" + s + "': " + e.what());
  }
}

KernelSpec parse_kernel_spec(const nlohmann::json& j) {
  KernelSpec k;
  k.json = j;
  try {
    k.family = j.at("family").get<std::string>();
    if (k.family == "gef") {
      k.radial = gef_kernel();
    } else if (k.family == "laguerre") {
      // "q" is the pure-type order, kernel L_{q-1}; "r" is the Laguerre index
      if (j.contains("r"))
        k.order = j.at("r").get<int>();
      else
        k.order = j.at("q").get<int>() - 1;
      if (k.order < 0) throw ConfigError("laguerre kernel needs r >= 0 (q >= 1)");
      k.radial = laguerre_kernel(k.order);
    } else if (k.family == "laguerre-avg") {
      k.order = j.at("q").get<int>();
      if (k.order < 1) throw ConfigError("laguerre-avg kernel needs q >= 1");
      k.radial = laguerre_avg_kernel(k.order);
    } else if (k.family == "custom") {
      if (j.contains("profile")) {
        k.radial = profile_kernel(j.at("profile"));
      } else {
        auto v = j.at("jet").get<std::vector<double>>();
        if (v.size() != 5) throw ConfigError("custom jet needs [b10, b01, h20, h02, h11]");
        k.jet = {v[0], v[1], v[2], v[3], v[4]};
        return k;
      }
    } else {
      throw ConfigError("unknown kernel family '" + k.family +
                        "' (expected gef|laguerre|laguerre-avg|custom)");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("kernel spec: ") + e.what());
  }
  k.jet = jet_from_radial(*k.radial);
  return k;
}

KernelSpec parse_kernel_arg(const std::string& s) {
  auto [head, rest] = split_head(s);
  if (head == "gef" && rest.empty()) return parse_kernel_spec({{"family", "gef"}});
  if (head == "laguerre") return parse_kernel_spec({{"family", "laguerre"}, {"r", as_int(rest, s)}});
  if (head == "laguerre-avg")
    return parse_kernel_spec({{"family", "laguerre-avg"}, {"q", as_int(rest, s)}});
  if (head == "exp") {
    auto v = split_numbers(rest, ',');
    if (v.size() != 1) throw ConfigError("exp kernel expects exp:a");
    return parse_kernel_spec({{"family", "custom"}, {"profile", {{"type", "exp"}, {"a", v[0]}}}});
  }
  if (head == "rational") {
    auto v = split_numbers(rest, ',');
    if (v.size() != 2) throw ConfigError("rational kernel expects rational:a,n");
    return parse_kernel_spec(
        {{"family", "custom"}, {"profile", {{"type", "rational"}, {"a", v[0]}, {"n", int(v[1])}}}});
  }
  if (head == "jet") {
    auto v = split_numbers(rest, ',');
    return parse_kernel_spec({{"family", "custom"}, {"jet", v}});
  }
  auto j = load_json_arg(s);
  if (j.contains("kernel")) j = j.at("kernel");
  return parse_kernel_spec(j);
}

Window parse_window_spec(const nlohmann::json& j) {
  try {
    std::string fam = j.at("family").get<std::string>();
    if (fam == "hermite") return hermite(j.at("r").get<int>());
    if (fam == "generalized-gaussian") {
      auto p = j.at("params").get<std::vector<double>>();
      if (p.size() != 5) throw ConfigError("generalized-gaussian needs params [sigma, phase, x0, xi0, xi1]");
      return generalized_gaussian(p[0], p[1], p[2], p[3], p[4]);
    }
    if (fam == "hermite-mixture") {
      std::vector<Complex> c;
      for (const auto& e : j.at("coeffs")) {
        if (e.is_array())
          c.emplace_back(e.at(0).get<double>(), e.size() > 1 ? e.at(1).get<double>() : 0.0);
        else
          c.emplace_back(e.get<double>(), 0.0);
      }
      return hermite_mixture(c);
    }
    if (fam == "samples") {
      std::optional<double> t0;
      if (j.contains("t0")) t0 = j.at("t0").get<double>();
      return load_sampled_window(j.at("samples_path").get<std::string>(), j.at("dt").get<double>(), t0);
    }
    if (fam == "transformed") {
      Window base = parse_window_spec(j.at("base"));
      return transform_window(base, j.at("x0").get<double>(), j.at("xi0").get<double>(),
                              j.at("xi1").get<double>());
    }
    throw ConfigError("unknown window family '" + fam +
                      "' (expected hermite|generalized-gaussian|hermite-mixture|samples)");
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("window spec: ") + e.what());
  }
}

Window parse_window_arg(const std::string& s) {
  auto [head, rest] = split_head(s);
  if (head == "hermite") return hermite(as_int(rest, s));
  if (head == "gaussian") {
    auto v = split_numbers(rest, ',');
    v.resize(5, 0.0);
    if (rest.empty()) v[0] = 1;
    return generalized_gaussian(v[0], v[1], v[2], v[3], v[4]);
  }
  if (head == "mixture") {
    std::vector<Complex> c;
    std::stringstream ss(rest);
    std::string item;
    while (std::getline(ss, item, ';')) {
      auto v = split_numbers(item, ',');
      if (v.empty() || v.size() > 2) throw ConfigError("mixture coefficient '" + item + "'");
      c.emplace_back(v[0], v.size() > 1 ? v[1] : 0.0);
    }
    return hermite_mixture(c);
  }
  if (head == "samples") {
    auto c = rest.rfind(',');
    if (c == std::string::npos) throw ConfigError("samples window expects samples:path,dt");
    return load_sampled_window(rest.substr(0, c), split_numbers(rest.substr(c + 1), ',').at(0));
  }
  auto j = load_json_arg(s);
  if (j.contains("window")) j = j.at("window");
  return parse_window_spec(j);
}

}  // namespace gwhf
