#pragma once

#include <string>
#include <vector>

#include "gwhf/simulate.hpp"

namespace gwhf {

struct ChargedZero {
  Complex position = 0;
  int charge = 0;         // orientation(plane) * winding
  int winding = 0;        // phase winding of the plaquette (+1 counterclockwise)
  bool refined = false;   // Newton converged inside the cell
  int jacobian_sign = 0;  // sign of det DF = -Im[F10 conj(F01)] at the position
  bool degenerate = false;
};

struct DiskStat {
  Complex center = 0;
  double radius = 0;
  int count = 0;
  int total_charge = 0;
};

struct CellIndex {
  int ix = 0, iy = 0;
};

struct ZeroSet {
  std::vector<ChargedZero> zeros;  // retained: position inside grid.interior
  int degenerate = 0;              // |jacobian| below threshold (kept, flagged)
  int mismatches = 0;              // winding != jacobian_sign among non-degenerate zeros
  int fallbacks = 0;               // Newton failed, bilinear position used
  int subdivided = 0;              // cells resampled from the evaluator
};

/// Charge orientation: +1 in the GWHF plane, -1 in STFT coordinates where
/// the charge is sgn Im[dV/dx conj(dV/dy)] = -sgn det DV.
int orientation(Plane plane);

int plaquette_winding(const FieldGrid& grid, int ix, int iy);

/// `eval` (optional) resamples cells whose |winding| >= 2, whose zero is
/// doubtful (Newton fallback, degenerate or disagreeing Jacobian), or which
/// wind 0 while the interpolant has a root inside (a pair closer than the
/// spacing), up to 64x. Same-charge copies closer than spacing/20 are merged.
/// Without it, |winding| >= 2 raises ResolutionError.
ZeroSet detect_zeros(const FieldGrid& grid, const FieldEvaluator* eval = nullptr);

/// Newton on the local bicubic interpolant seeded at the cell center;
/// falls back to the bilinear zero of the cell.
Complex refine_zero(const FieldGrid& grid, CellIndex cell, bool* converged = nullptr);

/// Value and analytic gradient of the local bicubic interpolant.
void interpolate(const FieldGrid& grid, Complex p, Complex& f, Complex& fx, Complex& fy);

/// Sign of -Im[F10 conj(F01)] from central differences (step = spacing) of
/// the interpolant, taken after removing the local phase ramp; 0 when degenerate.
int jacobian_sign(const FieldGrid& grid, Complex p);
int charge_of(const FieldGrid& grid, const ChargedZero& z);

/// Counts and signed charge sums in closed disks; non-degenerate zeros only.
std::vector<DiskStat> disk_stats(const std::vector<ChargedZero>& zeros, Complex center,
                                 const std::vector<double>& radii, const Domain& interior);

void write_zeros_csv(const std::string& path, const std::vector<ChargedZero>& zeros);
std::string zeros_csv(const std::vector<ChargedZero>& zeros);
std::vector<ChargedZero> read_zeros_csv(const std::string& path);

}  // namespace gwhf
