#pragma once

#include <functional>

namespace gwhf {

struct QuadResult {
  double value = 0;
  double error = 0;
};

/// Adaptive Gauss-Kronrod (31 point) on a finite interval.
QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              double abs_tol, unsigned max_depth = 20);

/// Composite 20-point Gauss-Legendre rule on `panels` equal panels.
/// `f(t, w)` is called for every node with its weight, so callers can
/// accumulate several integrands in one sweep.
void gauss_panels(const std::function<void(double, double)>& f, double a, double b, int panels);

/// Neumaier compensated sum.
class KahanSum {
public:
  void add(double x);
  double value() const { return sum_ + comp_; }

private:
  double sum_ = 0, comp_ = 0;
};

}  // namespace gwhf
