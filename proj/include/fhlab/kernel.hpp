#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "fhlab/potential.hpp"

namespace fhlab {

// Correlation kernel of the radial ensemble in the monomial basis.
struct PlanarKernel {
  PotentialSpec potential;
  int n = 0;
  double droplet_radius = 1.0;
  std::vector<double> log_norms;  // ln h_k, h_k = 2 pi int r^{2k+1} e^{-n v(r)} dr
  // Per-k window [lo, hi] outside which r^{2k+1} e^{-n v} is below e^{-60} of its peak.
  std::vector<double> window_lo, window_hi, peak;
};

PlanarKernel build_kernel(const PotentialSpec& v, int n);

// log of r^{2k+1} e^{-n v(r)}.
double kernel_log_weight(const PlanarKernel& k, int index, double r);

std::complex<double> kernel_eval(const PlanarKernel& k, std::complex<double> z,
                                 std::complex<double> w, bool weighted);

// (n/pi) d1d2V(z, conj w) e^{n V(z, conj w)}, weighted by e^{-n(V(z)+V(w))/2} if asked.
std::complex<double> bulk_approx_eval(const PlanarKernel& k, std::complex<double> z,
                                      std::complex<double> w, bool weighted = true);

// (distance, log|K(z, z + d)|) along the positive real direction.
std::vector<std::pair<double, double>> decay_profile(const PlanarKernel& k, std::complex<double> z,
                                                     const std::vector<double>& radii);

}  // namespace fhlab
