#include "fhlab/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "fhlab/errors.hpp"
#include "fhlab/quadrature.hpp"

namespace fhlab {

namespace {

constexpr double kDrop = 60.0;

template <class F>
double bisect(F&& f, double lo, double hi, int iters = 200) {
  // f(lo) < 0 <= f(hi)
  for (int i = 0; i < iters && hi - lo > 1e-15 * std::max(1.0, hi); ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double kernel_log_weight(const PlanarKernel& k, int index, double r) {
  if (r <= 0) return -std::numeric_limits<double>::infinity();
  return (2.0 * index + 1.0) * std::log(r) - k.n * k.potential.v(r);
}

PlanarKernel build_kernel(const PotentialSpec& v, int n) {
  if (!v.radial()) throw DomainError("build_kernel needs a radial potential");
  if (n < 1) throw DomainError("build_kernel needs n >= 1");
  v.validate();
  PlanarKernel K;
  K.potential = v;
  K.n = n;
  K.droplet_radius = equilibrium_droplet(v).first.radius;
  K.log_norms.resize(n);
  K.window_lo.resize(n);
  K.window_hi.resize(n);
  K.peak.resize(n);
  for (int k = 0; k < n; ++k) {
    const double a = 2.0 * k + 1.0;
    auto slope = [&](double r) { return r * n * v.dv(r) - a; };
    double hi = 1.0;
    while (slope(hi) < 0) {
      hi *= 2;
      if (hi > 1e8) throw QuadratureError("radial weight is not integrable");
    }
    const double rp = bisect(slope, 0.0, hi);
    const double phi_max = kernel_log_weight(K, k, rp);
    auto below = [&](double r) { return kernel_log_weight(K, k, r) - (phi_max - kDrop); };
    const double lo = bisect(below, 0.0, rp);
    double top = rp * 2;
    while (below(top) > 0) top *= 2;
    const double up = bisect([&](double r) { return -below(r); }, rp, top);
    auto shifted = [&](double r) { return std::exp(kernel_log_weight(K, k, r) - phi_max); };
    const double left = integrate(shifted, lo, rp, 1e-11, 0.0, 12);
    const double right = integrate(shifted, rp, up, 1e-11, 0.0, 12);
    K.log_norms[k] = std::log(2 * std::numbers::pi) + phi_max + std::log(left + right);
    K.window_lo[k] = lo;
    K.window_hi[k] = up;
    K.peak[k] = rp;
  }
  return K;
}

std::complex<double> kernel_eval(const PlanarKernel& K, std::complex<double> z,
                                 std::complex<double> w, bool weighted) {
  const double lim = 10 * K.droplet_radius;
  if (std::abs(z) > lim || std::abs(w) > lim)
    throw OverflowError("kernel evaluated outside the validated domain |z| <= 10 R");
  const std::complex<double> u = z * std::conj(w);
  const double wlog = weighted ? -0.5 * K.n * (K.potential.V(z) + K.potential.V(w)) : 0.0;
  if (std::abs(u) == 0) return std::exp(wlog - K.log_norms[0]);
  const double lu = std::log(std::abs(u));
  const double th = std::arg(u);
  double mx = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < K.n; ++k) mx = std::max(mx, k * lu - K.log_norms[k]);
  std::complex<double> s = 0.0;
  for (int k = 0; k < K.n; ++k) s += std::exp(k * lu - K.log_norms[k] - mx) * std::polar(1.0, k * th);
  return s * std::exp(mx + wlog);
}

std::complex<double> bulk_approx_eval(const PlanarKernel& K, std::complex<double> z,
                                      std::complex<double> w, bool weighted) {
  const double n = K.n;
  std::complex<double> e = n * K.potential.polarized(z, w);
  if (weighted) e -= 0.5 * n * (K.potential.V(z) + K.potential.V(w));
  return n / std::numbers::pi * K.potential.polarized_d12(z, w) * std::exp(e);
}

std::vector<std::pair<double, double>> decay_profile(const PlanarKernel& K, std::complex<double> z,
                                                     const std::vector<double>& radii) {
  std::vector<std::pair<double, double>> out;
  out.reserve(radii.size());
  for (double d : radii) out.emplace_back(d, std::log(std::abs(kernel_eval(K, z, z + d, true))));
  return out;
}

}  // namespace fhlab
