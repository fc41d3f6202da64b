#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <cstdio>
#include <complex>
#include <functional>
#include <string>

#include "fhlab/errors.hpp"

namespace fhlab {

// Adaptive Gauss-Kronrod on [a, b].  Throws QuadratureError when the
// error estimate is far above the requested tolerance.
template <class F>
double integrate(F&& f, double a, double b, double rel_tol = 1e-12, double abs_floor = 0.0,
                 unsigned max_depth = 20) {
  if (a == b) return 0.0;
  double err = 0.0, l1 = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      f, a, b, max_depth, rel_tol, &err, &l1);
  if (!std::isfinite(v)) throw QuadratureError("integrand produced a non-finite value");
  const double scale = std::max(l1, abs_floor);
  if (err > 1e3 * rel_tol * scale + abs_floor && err > 1e-13 * scale)
  {
    char msg[160];
    std::snprintf(msg, sizeof msg, "quadrature on [%g, %g] did not reach tolerance (err=%.3g, l1=%.3g)", a,
                  b, err, l1);
    throw QuadratureError(msg);
  }
  return v;
}

// Integral over the disk of radius rad about c in polar coordinates.
template <class F>
double integrate_disk(F&& f, std::complex<double> c, double rad, double rel_tol = 1e-11,
                      double abs_floor = 0.0) {
  auto ring = [&](double r) {
    if (r == 0) return 0.0;
    auto ang = [&](double t) { return f(c + std::polar(r, t)); };
    return r * integrate(ang, 0.0, 2 * 3.14159265358979323846, rel_tol, abs_floor, 12);
  };
  return integrate(ring, 0.0, rad, rel_tol, abs_floor, 15);
}

}  // namespace fhlab
