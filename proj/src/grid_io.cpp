#include "gwhf/grid_io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>

namespace gwhf {

namespace {

constexpr char kMagic[8] = {'G', 'W', 'H', 'F', 'G', 'R', 'I', 'D'};

static_assert(std::endian::native == std::endian::little, "grid I/O assumes a little-endian host");

}  // namespace

nlohmann::json grid_header(const FieldGrid& g) {
  return {{"format", "gwhf-grid"},
          {"version", 1},
          {"plane", to_string(g.plane)},
          {"origin", {g.origin.real(), g.origin.imag()}},
          {"spacing", g.spacing},
          {"nx", g.nx},
          {"ny", g.ny},
          {"seed", g.seed},
          {"realization", g.realization},
          {"margin", g.margin},
          {"interior", {g.interior.x0, g.interior.x1, g.interior.y0, g.interior.y1}},
          {"meta", g.meta}};
}

void write_grid(const std::string& path, const FieldGrid& g) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write grid '" + path + "'");
  std::string head = grid_header(g).dump();
  auto len = static_cast<std::uint32_t>(head.size());
  out.write(kMagic, 8);
  out.write(reinterpret_cast<const char*>(&len), 4);
  out.write(head.data(), static_cast<std::streamsize>(head.size()));
  std::vector<float> buf(2 * g.values.size());
  for (std::size_t i = 0; i < g.values.size(); ++i) {
    buf[2 * i] = static_cast<float>(g.values[i].real());
    buf[2 * i + 1] = static_cast<float>(g.values[i].imag());
  }
  out.write(reinterpret_cast<const char*>(buf.data()),
            static_cast<std::streamsize>(buf.size() * sizeof(float)));
  if (!out) throw Error("short write on '" + path + "'");
}

FieldGrid read_grid(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open grid '" + path + "'");
  char magic[8];
  std::uint32_t len = 0;
  in.read(magic, 8);
  in.read(reinterpret_cast<char*>(&len), 4);
  if (!in || std::memcmp(magic, kMagic, 8) != 0) throw Error("'" + path + "' is not a gwhf grid");
  std::string head(len, '\0');
  in.read(head.data(), len);
  auto h = nlohmann::json::parse(head);
  FieldGrid g;
  g.plane = h.at("plane").get<std::string>() == "stft" ? Plane::stft : Plane::gwhf;
  g.origin = Complex(h.at("origin")[0].get<double>(), h.at("origin")[1].get<double>());
  g.spacing = h.at("spacing").get<double>();
  g.nx = h.at("nx").get<int>();
  g.ny = h.at("ny").get<int>();
  g.seed = h.at("seed").get<std::uint64_t>();
  g.realization = h.value("realization", 0u);
  g.margin = h.value("margin", 0.0);
  auto d = h.at("interior");
  g.interior = {d[0].get<double>(), d[1].get<double>(), d[2].get<double>(), d[3].get<double>()};
  g.meta = h.value("meta", nlohmann::json::object());
  std::vector<float> buf(2 * static_cast<std::size_t>(g.nx) * g.ny);
  in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size() * sizeof(float)));
  if (!in) throw Error("'" + path + "' is truncated");
  g.values.resize(buf.size() / 2);
  for (std::size_t i = 0; i < g.values.size(); ++i) g.values[i] = Complex(buf[2 * i], buf[2 * i + 1]);
  return g;
}

void write_grid_csv(const std::string& path, const FieldGrid& g) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw Error("cannot write '" + path + "'");
  std::fprintf(f, "x,y,re,im\n");
  for (int iy = 0; iy < g.ny; ++iy)
    for (int ix = 0; ix < g.nx; ++ix) {
      Complex z = g.point(ix, iy), v = g.at(ix, iy);
      std::fprintf(f, "%.9g,%.9g,%.9g,%.9g\n", z.real(), z.imag(), v.real(), v.imag());
    }
  std::fclose(f);
}

}  // namespace gwhf
