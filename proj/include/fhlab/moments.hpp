#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "fhlab/potential.hpp"
#include "fhlab/sampler.hpp"
#include "fhlab/specfun.hpp"
#include "fhlab/testfn.hpp"

namespace fhlab {

struct Singularity {
  std::complex<double> zeta;
  double gamma = 0.0;
};

struct MomentQuery {
  std::vector<Singularity> singularities;
  TestFn test_fn;
  int n = 0;
  double kappa = 0.05;
};

struct MCEstimate {
  double log_mean = 0.0;
  double rel_stderr = 0.0;
  std::size_t samples = 0;
  double ess = 0.0;
};

// Throws HypothesisViolation unless every singularity is farther than
// n^{-1/2+kappa} from the boundary and from the others, and a localized
// test function has scale at least n^{-1/2+kappa}.
void validate_query(const MomentQuery& q, const Droplet& d, const PotentialSpec& v);

LogValue fh_rhs_ginibre(const MomentQuery& q);
LogValue fh_rhs_general(const PotentialSpec& v, const MomentQuery& q);

// Per-sample log weight sum_i f(z_i) + sum_j gamma_j sum_i ln|z_i - zeta_j|.
double moment_log_weight(const Spectrum& s, const MomentQuery& q);

// Log-mean-exp of the weights with a jackknife standard error.
MCEstimate log_mean_exp(const std::vector<double>& w);
MCEstimate mc_moment(const std::vector<Spectrum>& spectra, const MomentQuery& q,
                     unsigned threads = 1);

std::complex<double> ward_statistic(const Spectrum& s, const TestFn& h, const PotentialSpec& v);

std::complex<double> isotropy_statistic(const Spectrum& s, const TestFn& g, double delta);

// sigma^2 = (1/4pi) int_D |grad f|^2 + (1/2) ||f||^2_{H^{1/2}}, Ginibre.
double linear_stat_variance_prediction(const TestFn& f);

// Pieces of the f-dependent part, exposed for tests.
struct DiskIntegrals {
  double mass = 0;        // int_S f dmu_V
  double dirichlet = 0;   // int_S |grad f|^2
  double laplace = 0;     // int_S Delta f
  double laplace_l = 0;   // int_S Delta f (L - L(R))
  double exterior = 0;    // exterior Dirichlet energy of the boundary data
  double boundary_mean = 0;  // int f d omega
};
DiskIntegrals disk_integrals(const TestFn& f, const EquilibriumMeasure& mu);

}  // namespace fhlab
