#include "gwhf/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

namespace gwhf {

QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              double abs_tol, unsigned max_depth) {
  QuadResult r;
  if (a == b) return r;
  using gk = boost::math::quadrature::gauss_kronrod<double, 31>;
  double l1 = 0;
  gk::integrate(f, a, b, 0, 1.0, &r.error, &l1);
  double tol = abs_tol / std::max(l1, 1e-300);
  r.value = gk::integrate(f, a, b, max_depth, tol, &r.error, &l1);
  return r;
}

void gauss_panels(const std::function<void(double, double)>& f, double a, double b, int panels) {
  using rule = boost::math::quadrature::gauss<double, 20>;
  const auto& x = rule::abscissa();
  const auto& w = rule::weights();
  double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    double mid = a + (p + 0.5) * h, half = 0.5 * h;
    for (std::size_t k = 0; k < x.size(); ++k) {
      f(mid - half * x[k], half * w[k]);
      f(mid + half * x[k], half * w[k]);
    }
  }
}

void KahanSum::add(double x) {
  double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x))
    comp_ += (sum_ - t) + x;
  else
    comp_ += (x - t) + sum_;
  sum_ = t;
}

}  // namespace gwhf
