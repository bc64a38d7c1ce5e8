#include "gwhf/zeros.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace gwhf {

namespace {

double wrap(double d) {
  if (d > pi) d -= 2 * pi;
  if (d <= -pi) d += 2 * pi;
  return d;
}

// cubic Lagrange basis on nodes -1, 0, 1, 2 and its derivative
void lagrange(double x, double* w, double* dw) {
  w[0] = -x * (x - 1) * (x - 2) / 6;
  w[1] = (x + 1) * (x - 1) * (x - 2) / 2;
  w[2] = -(x + 1) * x * (x - 2) / 2;
  w[3] = (x + 1) * x * (x - 1) / 6;
  dw[0] = -(3 * x * x - 6 * x + 2) / 6;
  dw[1] = (3 * x * x - 4 * x - 1) / 2;
  dw[2] = -(3 * x * x - 2 * x - 2) / 2;
  dw[3] = (3 * x * x - 1) / 6;
}

// gradient of the deterministic phase ramp carried by the twisted structure
void phase_gradient(Plane plane, Complex z, double& gx, double& gy) {
  if (plane == Plane::stft) {
    gx = 0;
    gy = -2 * pi * z.real();
  } else {
    gx = -z.imag();
    gy = z.real();
  }
}

// F times exp(-i psi), psi the linear phase ramp through zc
struct Demod {
  Complex zc;
  double gx, gy;
  Demod(const FieldGrid& g, Complex c) : zc(c) { phase_gradient(g.plane, c, gx, gy); }
  double psi(Complex z) const { return gx * (z.real() - zc.real()) + gy * (z.imag() - zc.imag()); }
  Complex factor(Complex z) const { return std::polar(1.0, -psi(z)); }
};

// bicubic interpolant of the demodulated field and its gradient
void interp_demod(const FieldGrid& g, const Demod& dm, Complex p, Complex& f, Complex& fx, Complex& fy) {
  const double h = g.spacing;
  double u = (p.real() - g.origin.real()) / h, v = (p.imag() - g.origin.imag()) / h;
  int i = std::clamp(static_cast<int>(std::floor(u)), 1, g.nx - 3);
  int j = std::clamp(static_cast<int>(std::floor(v)), 1, g.ny - 3);
  double wu[4], dwu[4], wv[4], dwv[4];
  lagrange(u - i, wu, dwu);
  lagrange(v - j, wv, dwv);
  f = fx = fy = 0;
  for (int b = 0; b < 4; ++b) {
    Complex row = 0, drow = 0;
    for (int a = 0; a < 4; ++a) {
      Complex val = g.at(i - 1 + a, j - 1 + b) * dm.factor(g.point(i - 1 + a, j - 1 + b));
      row += wu[a] * val;
      drow += dwu[a] * val;
    }
    f += wv[b] * row;
    fx += wv[b] * drow;
    fy += dwv[b] * row;
  }
  fx /= h;
  fy /= h;
}

Complex bilinear_zero(const FieldGrid& g, CellIndex c) {
  const double h = g.spacing;
  Demod dm(g, g.point(c.ix, c.iy) + Complex(0.5 * h, 0.5 * h));
  auto val = [&](int a, int b) { return g.at(c.ix + a, c.iy + b) * dm.factor(g.point(c.ix + a, c.iy + b)); };
  Complex f00 = val(0, 0), f10 = val(1, 0), f01 = val(0, 1), f11 = val(1, 1);
  double u = 0.5, v = 0.5;
  for (int it = 0; it < 30; ++it) {
    Complex F = f00 * (1 - u) * (1 - v) + f10 * u * (1 - v) + f01 * (1 - u) * v + f11 * u * v;
    Complex Fu = (f10 - f00) * (1 - v) + (f11 - f01) * v;
    Complex Fv = (f01 - f00) * (1 - u) + (f11 - f10) * u;
    double a = Fu.real(), b = Fv.real(), cc = Fu.imag(), d = Fv.imag();
    double det = a * d - b * cc;
    if (det == 0) break;
    double du = -(d * F.real() - b * F.imag()) / det;
    double dv = -(-cc * F.real() + a * F.imag()) / det;
    u = std::clamp(u + du, 0.0, 1.0);
    v = std::clamp(v + dv, 0.0, 1.0);
    if (std::abs(du) + std::abs(dv) < 1e-14) break;
  }
  return g.point(c.ix, c.iy) + h * Complex(u, v);
}

// 4x resampled patch around a cell, with two sub-cells of padding
FieldGrid subdivide(const FieldGrid& g, CellIndex c, const FieldEvaluator& eval) {
  const int k = 4, pad = 2;
  FieldGrid s;
  s.nx = s.ny = k + 1 + 2 * pad;
  s.spacing = g.spacing / k;
  s.origin = g.point(c.ix, c.iy) - Complex(pad * s.spacing, pad * s.spacing);
  s.plane = g.plane;
  s.interior = g.interior;
  s.values.resize(static_cast<std::size_t>(s.nx) * s.ny);
  for (int iy = 0; iy < s.ny; ++iy)
    for (int ix = 0; ix < s.nx; ++ix) s.at(ix, iy) = eval(s.point(ix, iy));
  return s;
}

// A quiet cell can still hold an opposite pair closer than the spacing. The
// field is smooth on that scale, so the interpolant finds one of the roots.
constexpr double kProbeRatio = 0.5;

bool hides_root(const FieldGrid& g, int ix, int iy) {
  if (ix < 1 || iy < 1 || ix > g.nx - 3 || iy > g.ny - 3) return false;
  double rms = 0, low = INFINITY;
  for (int b = -1; b <= 2; ++b)
    for (int a = -1; a <= 2; ++a) {
      double v = std::norm(g.at(ix + a, iy + b));
      rms += v;
      if (a >= 0 && a <= 1 && b >= 0 && b <= 1) low = std::min(low, v);
    }
  if (low > kProbeRatio * kProbeRatio * rms / 16) return false;
  bool conv = false;
  Complex p = refine_zero(g, {ix, iy}, &conv) - g.point(ix, iy);
  const double h = g.spacing;
  return conv && p.real() > 0 && p.real() < h && p.imag() > 0 && p.imag() < h;
}

ChargedZero make_zero(const FieldGrid& g, CellIndex c, int w) {
  ChargedZero z;
  bool conv = false;
  z.position = refine_zero(g, c, &conv);
  z.refined = conv;
  z.winding = w;
  z.charge = orientation(g.plane) * w;
  z.jacobian_sign = jacobian_sign(g, z.position);
  z.degenerate = z.jacobian_sign == 0;
  return z;
}

constexpr int kMaxDepth = 3;  // 4^3 = 64x finer than the input grid

std::string where(const FieldGrid& g, CellIndex c) {
  std::ostringstream os;
  os << "cell near (" << g.point(c.ix, c.iy).real() << ", " << g.point(c.ix, c.iy).imag() << ")";
  return os.str();
}

// Zeros of one flagged cell. A doubtful answer (multiple winding, Newton
// fallback, degenerate or disagreeing Jacobian) resamples the cell 4x.
void resolve_cell(const FieldGrid& g, CellIndex c, int w, const FieldEvaluator* eval, int depth,
                  ZeroSet& out) {
  if (std::abs(w) == 1) {
    ChargedZero z = make_zero(g, c, w);
    bool doubt = !z.refined || z.degenerate || z.jacobian_sign != w;
    if (!doubt || !eval || depth == kMaxDepth) {
      if (!z.refined) ++out.fallbacks;
      if (z.degenerate)
        ++out.degenerate;
      else if (z.jacobian_sign != w)
        ++out.mismatches;
      if (g.interior.contains(z.position)) out.zeros.push_back(z);
      return;
    }
  } else if (w == 0) {
    if (!eval || depth == kMaxDepth) return;
  } else if (!eval) {
    throw ResolutionError(where(g, c) + " has winding " + std::to_string(w) +
                          "; refine the grid spacing or supply a point evaluator");
  } else if (depth == kMaxDepth) {
    throw ResolutionError(where(g, c) + " keeps winding " + std::to_string(w) + " after " +
                          std::to_string(kMaxDepth) + " 4x refinements");
  }
  if (depth == 0) ++out.subdivided;
  FieldGrid sub = subdivide(g, c, *eval);
  // sub-cells 2..5 tile the parent cell
  for (int sy = 2; sy < 6; ++sy)
    for (int sx = 2; sx < 6; ++sx) {
      int sw = plaquette_winding(sub, sx, sy);
      if (sw != 0 || hides_root(sub, sx, sy)) resolve_cell(sub, {sx, sy}, sw, eval, depth + 1, out);
    }
}

// a zero next to a cell edge can be reached from both sides once quiet
// cells get resampled; keep the first copy
void drop_duplicates(std::vector<ChargedZero>& zs, double tol) {
  std::vector<std::size_t> idx(zs.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return zs[a].position.real() < zs[b].position.real(); });
  std::vector<char> dead(zs.size(), 0);
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = a + 1; b < idx.size(); ++b) {
      const auto &p = zs[idx[a]], &q = zs[idx[b]];
      if (q.position.real() - p.position.real() > tol) break;
      if (p.charge == q.charge && std::abs(p.position - q.position) < tol) dead[std::max(idx[a], idx[b])] = 1;
    }
  std::size_t k = 0;
  for (std::size_t i = 0; i < zs.size(); ++i)
    if (!dead[i]) zs[k++] = zs[i];
  zs.resize(k);
}

}  // namespace

int orientation(Plane plane) { return plane == Plane::stft ? -1 : 1; }

int plaquette_winding(const FieldGrid& g, int ix, int iy) {
  const Complex z[4] = {g.point(ix, iy), g.point(ix + 1, iy), g.point(ix + 1, iy + 1), g.point(ix, iy + 1)};
  const Complex f[4] = {g.at(ix, iy), g.at(ix + 1, iy), g.at(ix + 1, iy + 1), g.at(ix, iy + 1)};
  double tot = 0;
  for (int k = 0; k < 4; ++k) {
    int l = (k + 1) % 4;
    // branch closest to the predicted ramp increment along the edge
    double gx, gy;
    phase_gradient(g.plane, 0.5 * (z[k] + z[l]), gx, gy);
    Complex dz = z[l] - z[k];
    double pred = gx * dz.real() + gy * dz.imag();
    tot += pred + wrap(std::arg(f[l]) - std::arg(f[k]) - pred);
  }
  return static_cast<int>(std::lround(tot / (2 * pi)));
}

void interpolate(const FieldGrid& g, Complex p, Complex& f, Complex& fx, Complex& fy) {
  Demod dm(g, p);
  Complex G, Gx, Gy;
  interp_demod(g, dm, p, G, Gx, Gy);
  // psi(p) = 0
  f = G;
  fx = Gx + Complex(0, dm.gx) * G;
  fy = Gy + Complex(0, dm.gy) * G;
}

Complex refine_zero(const FieldGrid& g, CellIndex c, bool* converged) {
  const double h = g.spacing;
  const Complex lo = g.point(c.ix, c.iy);
  Complex p = lo + Complex(0.5 * h, 0.5 * h);
  double rms = 0;
  for (int b = -1; b <= 2; ++b)
    for (int a = -1; a <= 2; ++a) {
      int ii = std::clamp(c.ix + a, 0, g.nx - 1), jj = std::clamp(c.iy + b, 0, g.ny - 1);
      rms += std::norm(g.at(ii, jj));
    }
  rms = std::sqrt(rms / 16);
  bool ok = false;
  bool usable = g.nx >= 4 && g.ny >= 4;
  Demod dm(g, p);
  for (int it = 0; usable && it < 20; ++it) {
    Complex f, fx, fy;
    interp_demod(g, dm, p, f, fx, fy);
    double a = fx.real(), b = fy.real(), cc = fx.imag(), d = fy.imag();
    double det = a * d - b * cc;
    if (det == 0 || !std::isfinite(det)) break;
    double dx = -(d * f.real() - b * f.imag()) / det;
    double dy = -(-cc * f.real() + a * f.imag()) / det;
    p += Complex(dx, dy);
    if (std::abs(p - lo) > 4 * h) break;
    if (std::hypot(dx, dy) < 1e-13 * h) {
      ok = true;
      break;
    }
  }
  if (ok) {
    Complex f, fx, fy;
    interp_demod(g, dm, p, f, fx, fy);
    const double tol = 0.05 * h;
    bool inside = p.real() >= lo.real() - tol && p.real() <= lo.real() + h + tol &&
                  p.imag() >= lo.imag() - tol && p.imag() <= lo.imag() + h + tol;
    ok = inside && std::abs(f) < 1e-3 * rms;
  }
  if (converged) *converged = ok;
  return ok ? p : bilinear_zero(g, c);
}

int jacobian_sign(const FieldGrid& g, Complex p) {
  const double h = g.spacing;
  // the unit-modulus demodulation factor leaves det DF unchanged at a zero
  Demod dm(g, p);
  Complex d1, d2, fp, fm, gp, gm;
  interp_demod(g, dm, p + h, fp, d1, d2);
  interp_demod(g, dm, p - h, fm, d1, d2);
  interp_demod(g, dm, p + Complex(0, h), gp, d1, d2);
  interp_demod(g, dm, p - Complex(0, h), gm, d1, d2);
  Complex fx = (fp - fm) / (2 * h), fy = (gp - gm) / (2 * h);
  double jac = -(fx * std::conj(fy)).imag();
  if (std::abs(jac) < 1e-12 * (std::norm(fx) + std::norm(fy))) return 0;
  return jac > 0 ? 1 : -1;
}

int charge_of(const FieldGrid& g, const ChargedZero& z) {
  return orientation(g.plane) * jacobian_sign(g, z.position);
}

ZeroSet detect_zeros(const FieldGrid& g, const FieldEvaluator* eval) {
  if (g.nx < 2 || g.ny < 2) throw DomainError("grid too small for zero detection");
  ZeroSet out;
  // cells whose square meets the interior; attribution is by refined position
  const double h = g.spacing;
  int ix0 = std::max(0, static_cast<int>(std::floor((g.interior.x0 - g.origin.real()) / h)) - 1);
  int ix1 = std::min(g.nx - 2, static_cast<int>(std::ceil((g.interior.x1 - g.origin.real()) / h)));
  int iy0 = std::max(0, static_cast<int>(std::floor((g.interior.y0 - g.origin.imag()) / h)) - 1);
  int iy1 = std::min(g.ny - 2, static_cast<int>(std::ceil((g.interior.y1 - g.origin.imag()) / h)));
  if (ix1 < ix0 || iy1 < iy0) throw DomainError("grid interior is empty");

  for (int iy = iy0; iy <= iy1; ++iy)
    for (int ix = ix0; ix <= ix1; ++ix) {
      int w = plaquette_winding(g, ix, iy);
      if (w != 0 || (eval && hides_root(g, ix, iy))) resolve_cell(g, {ix, iy}, w, eval, 0, out);
    }
  drop_duplicates(out.zeros, 0.05 * h);
  return out;
}

std::vector<DiskStat> disk_stats(const std::vector<ChargedZero>& zeros, Complex center,
                                 const std::vector<double>& radii, const Domain& in) {
  std::vector<DiskStat> out;
  for (double R : radii) {
    if (!(R >= 0)) throw DomainError("disk radius must be non-negative");
    if (center.real() - R < in.x0 || center.real() + R > in.x1 || center.imag() - R < in.y0 ||
        center.imag() + R > in.y1)
      throw DomainError("disk of radius " + std::to_string(R) + " leaves the interior region");
    DiskStat d{center, R, 0, 0};
    for (const auto& z : zeros) {
      if (z.degenerate || std::abs(z.position - center) > R) continue;
      ++d.count;
      d.total_charge += z.charge;
    }
    out.push_back(d);
  }
  return out;
}

std::string zeros_csv(const std::vector<ChargedZero>& zeros) {
  std::string s = "x,y,charge,winding,refined\n";
  char buf[128];
  for (const auto& z : zeros) {
    std::snprintf(buf, sizeof buf, "%.9g,%.9g,%d,%d,%d\n", z.position.real(), z.position.imag(),
                  z.charge, z.winding, z.refined ? 1 : 0);
    s += buf;
  }
  return s;
}

void write_zeros_csv(const std::string& path, const std::vector<ChargedZero>& zeros) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << zeros_csv(zeros);
}

std::vector<ChargedZero> read_zeros_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::string line;
  std::vector<ChargedZero> out;
  if (!std::getline(in, line)) return out;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "x,y,charge,winding,refined")
    throw Error(path + ": expected header 'x,y,charge,winding,refined'");
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    double x, y;
    int q, w, r;
    char tail;
    if (std::sscanf(line.c_str(), "%lf,%lf,%d,%d,%d%c", &x, &y, &q, &w, &r, &tail) != 5)
      throw Error(path + ":" + std::to_string(lineno) + ": malformed row '" + line + "'");
    ChargedZero z;
    z.position = Complex(x, y);
    z.charge = q;
    z.winding = w;
    z.refined = r != 0;
    out.push_back(z);
  }
  return out;
}

}  // namespace gwhf
