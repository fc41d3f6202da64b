#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "fhlab/kernel.hpp"
#include "fhlab/potential.hpp"

namespace fhlab {

// Numeric values double as the method tag of the binary batch format.
enum class SamplerMethod : std::uint64_t {
  GinibreDense = 0,
  KostlanModuli = 1,
  RadialDPP = 2,
  MALA = 3,
  GinibreHessenberg = 4,
};

std::string method_name(SamplerMethod m);
SamplerMethod method_from_name(const std::string& s);

struct Spectrum {
  std::vector<std::complex<double>> points;
  PotentialSpec potential;
  int n = 0;
  std::uint64_t seed = 0;
  SamplerMethod method = SamplerMethod::GinibreDense;
  bool moduli_only = false;  // Kostlan: points are real, nonnegative moduli
  double acceptance_rate = std::numeric_limits<double>::quiet_NaN();
};

// Eigenvalues of an n x n matrix with iid CN(0, 1/n) entries.
Spectrum sample_ginibre_spectrum(int n, std::uint64_t seed);

// Same law through the upper Hessenberg form: CN(0, 1/n) entries on and
// above the diagonal and subdiagonal sqrt(Gamma(n-k, 1)/n).  Eigenvalues
// only, cheaper than the dense route.
Spectrum sample_ginibre_hessenberg(int n, std::uint64_t seed);

Spectrum sample_kostlan_moduli(int n, std::uint64_t seed);

// Exact sample of the projection process with the monomial kernel.
Spectrum sample_radial_dpp(const PotentialSpec& v, int n, std::uint64_t seed);
Spectrum sample_radial_dpp(const PlanarKernel& k, std::uint64_t seed);

struct MalaOptions {
  long burn_in = 50000;     // sweeps with step-size adaptation
  double target_acceptance = 0.574;
  bool adapt = true;
};

// Metropolis-adjusted Langevin chain on the beta = 2 Gibbs density.  A
// sweep is n single-particle proposals; `steps` counts sweeps including
// burn-in.
Spectrum sample_coulomb_mala(const PotentialSpec& v, int n, long steps, double step_size,
                             std::uint64_t seed, const MalaOptions& opt = {});

struct BatchRequest {
  SamplerMethod method = SamplerMethod::GinibreDense;
  PotentialSpec potential;
  int n = 0;
  long count = 0;
  std::uint64_t seed = 0;
  long mala_steps = 0;
  double mala_step_size = 0.1;
  MalaOptions mala;
};

// Sample i is drawn with seed derive_seed(seed, i).
std::vector<Spectrum> sample_batch(const BatchRequest& req, unsigned threads = 1);

}  // namespace fhlab
