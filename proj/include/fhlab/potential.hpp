#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "fhlab/testfn.hpp"

namespace fhlab {

using cplx = std::complex<double>;

enum class PotentialKind { Ginibre, RadialEven, Custom };

// External field V.  RadialEven stores v(r) = sum_k a_k r^{2k} with
// coeffs[k] = a_k (coeffs[0] is an additive constant).
struct PotentialSpec {
  PotentialKind kind = PotentialKind::Ginibre;
  std::vector<double> coeffs{0.0, 1.0};
  std::function<double(cplx)> custom_v;
  std::function<cplx(cplx)> custom_dv;   // holomorphic derivative dV/dz
  std::function<double(cplx)> custom_lap;

  static PotentialSpec ginibre();
  static PotentialSpec radial_even(std::vector<double> a);
  static PotentialSpec custom(std::function<double(cplx)> v, std::function<cplx(cplx)> dv,
                              std::function<double(cplx)> lap);

  bool radial() const { return kind != PotentialKind::Custom; }
  int degree() const { return static_cast<int>(coeffs.size()) - 1; }

  double V(cplx z) const;
  cplx dV(cplx z) const;              // d/dz
  double laplacian(cplx z) const;     // 4 d dbar V
  cplx gradient(cplx z) const;        // V_x + i V_y

  // Radial profile and derivatives (radial kinds only).
  double v(double r) const;
  double dv(double r) const;
  double d2v(double r) const;
  double lap_r(double r) const;

  // Polarization V(z, conj w) and d1 d2 V(z, conj w).
  cplx polarized(cplx z, cplx w) const;
  cplx polarized_d12(cplx z, cplx w) const;

  // Throws DomainError for growth or positivity violations.
  void validate() const;
  std::string describe() const;
};

enum class DropletShape { Disk, ExteriorMap };

struct Droplet {
  DropletShape shape = DropletShape::Disk;
  double radius = 1.0;
  // psi(w) = c1 w + c0 + c_{-1}/w + ... ; laurent = {c1, c0, c_{-1}, ...}
  std::vector<cplx> laurent;
  double capacity_log = 0.0;

  static Droplet disk(double r);
  static Droplet exterior_map(std::vector<cplx> coeffs);
  static Droplet ellipse(double a, double b);

  cplx psi(cplx w) const;
  cplx dpsi(cplx w) const;
  // Inverse exterior map.  Continues from guess when given; the root may
  // lie inside the unit circle when z is inside the droplet.
  cplx phi(cplx z, cplx guess = cplx(0, 0)) const;
  cplx boundary_point(double theta) const { return psi(std::polar(1.0, theta)); }
  double diameter() const;
  bool contains(cplx z) const;
};

struct EquilibriumMeasure {
  Droplet droplet;
  PotentialSpec potential;
  double density(double r) const;  // Delta v / (4 pi) on the droplet, 0 outside
  double mass_within(double r) const;
};

struct MollifierParams {
  double epsilon = 0.1;
};

// Fourier data of a boundary function in the map parameter.
struct FourierData {
  int kmax = 0;
  std::vector<cplx> coeffs;  // index k + kmax for k in [-kmax, kmax]
  cplx at(int k) const { return (k < -kmax || k > kmax) ? cplx(0, 0) : coeffs[k + kmax]; }
  static FourierData from_samples(const std::function<double(double)>& f, int kmax,
                                  int oversample = 4);
};

// Bounded harmonic extension of boundary data to the droplet complement.
struct HarmonicExtension {
  Droplet droplet;
  FourierData data;
  bool truncation_warning = false;
  double tail_energy = 0.0;

  double value(cplx z) const;
  double value_at_infinity() const { return data.at(0).real(); }
  cplx g_plus(cplx z) const;   // analytic part sum_{k>=0} c_{-k} w^{-k}
  cplx g_minus(cplx z) const;  // conjugate-analytic part sum_{k>=1} c_k conj(w)^{-k}
  // Outward normal derivative on the exterior side at map parameter theta.
  double exterior_normal_derivative(double theta) const;
  // Dirichlet energy of the extension over the complement.
  double exterior_dirichlet_energy() const;
};

std::pair<Droplet, EquilibriumMeasure> equilibrium_droplet(const PotentialSpec& v);

double eq_log_potential(const EquilibriumMeasure& mu, cplx zeta);

double capacity(const Droplet& d);
double capacity_energy(const Droplet& d, int points = 256);

double harmonic_measure_density(const Droplet& d, double theta);
double harmonic_measure_arclength(const Droplet& d, double theta);

struct HittingHistogram {
  std::vector<double> hits;    // boundary parameter of each walker in [0, 2 pi)
  std::vector<long> counts;    // histogram over `bins` equal parameter cells
  long total_steps = 0;
};

HittingHistogram brownian_hitting_estimate(const Droplet& d, long walkers, double start_radius,
                                           double step, std::uint64_t seed, unsigned threads = 1,
                                           int bins = 64);

HarmonicExtension harmonic_extension(const Droplet& d, const std::function<double(cplx)>& f,
                                     int kmax = 256);
HarmonicExtension harmonic_extension(const Droplet& d, const FourierData& data);

double neumann_jump(const Droplet& d, const std::function<double(cplx)>& g, double theta);
// Closed form for a radial g on a disk: only the interior radial slope survives.
double neumann_jump_radial(double interior_slope);

double mollified_log(const MollifierParams& p, cplx z);
double mollified_log_quadrature2d(const MollifierParams& p, cplx z);
double bump(double x2);  // chi as a function of |x|^2
double mollifier_constant();  // c_chi = log_1(0)

double h_half_norm(const FourierData& f);

}  // namespace fhlab
