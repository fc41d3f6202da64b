#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <map>
#include <vector>

#include "fhlab/potential.hpp"
#include "fhlab/sampler.hpp"

namespace fhlab {

struct Rect {
  double x0 = -0.5, x1 = 0.5, y0 = -0.5, y1 = 0.5;
  double area() const { return (x1 - x0) * (y1 - y0); }
};

// Cell-centered grid: node (i, j) sits at the center of cell (i, j).
struct GridGeometry {
  Rect region;
  int resolution = 64;
  int size() const { return resolution * resolution; }
  double cell_area() const { return region.area() / (double(resolution) * resolution); }
  std::complex<double> node(int idx) const;
};

enum class Centering { AnalyticAsymptotic, EmpiricalMean };

struct FieldGrid {
  GridGeometry grid;
  std::vector<double> values;
  std::vector<double> center;  // centering subtracted at each node
  int n = 0;
  Centering centering = Centering::AnalyticAsymptotic;
  std::vector<int> jittered;  // node indices moved off an eigenvalue
};

struct GmcSample {
  GridGeometry grid;
  std::vector<double> weights;
  double total() const;
  // Mass of the cells whose nodes fall inside r.
  double mass(const Rect& r) const;
};

// n int log|z - w| dmu_V(w) + 1/4 + (L(z) - L(R))/4.
double field_centering(const PotentialSpec& v, std::complex<double> z, int n);

// sum_i log|node - z_i| at every node.  Nodes within 1e-14 of an
// eigenvalue are shifted by 1e-12 and recorded.
std::vector<double> uncentered_field(const Spectrum& s, const GridGeometry& g,
                                     std::vector<int>* jittered = nullptr);

// Mean uncentered field over a batch, for EmpiricalMean centering.
std::vector<double> empirical_centering(const std::vector<Spectrum>& batch, const GridGeometry& g,
                                        unsigned threads = 1);

FieldGrid eval_field(const Spectrum& s, const GridGeometry& g, const PotentialSpec& v,
                     Centering mode = Centering::AnalyticAsymptotic,
                     const std::vector<double>* empirical_mean = nullptr);

struct CltCovariance {
  Eigen::MatrixXd empirical;  // sample covariance / ln n
  Eigen::MatrixXd predicted;
};

CltCovariance clt_covariance(const std::vector<Spectrum>& batch,
                             const std::vector<std::complex<double>>& zetas, double kappa = 0.05);

// Cell weights area * exp(gamma log|det(M - node)| - log E|det(M - node)|^gamma),
// the denominator taken from the single-singularity moment formula.
GmcSample matrix_gmc_measure(const FieldGrid& field, double gamma, const PotentialSpec& v);

// log E|det(M - node)|^gamma from the single-singularity moment formula.
std::vector<double> gmc_log_normalizers(const GridGeometry& g, double gamma, const PotentialSpec& v,
                                        int n);

// Doubly mollified -log|d|: exact -log d for d >= 2 eps.
double mollified_log_covariance(double d, double eps);

// Reference chaos on the grid with covariance C + s.  The factorization is
// computed once and reused for every sample.
class ReferenceGmc {
 public:
  ReferenceGmc(const GridGeometry& g, double gamma_prime, double s, double epsilon);
  GmcSample sample(std::uint64_t seed) const;
  const Eigen::MatrixXd& covariance() const { return cov_; }
  // The Gaussian layer gamma' * Y behind one sample.
  Eigen::VectorXd gaussian_layer(std::uint64_t seed) const;

 private:
  GridGeometry grid_;
  double gamma_prime_;
  Eigen::MatrixXd cov_;
  Eigen::MatrixXd chol_;
};

GmcSample reference_gmc_sample(const GridGeometry& g, double gamma_prime, double s, double epsilon,
                               std::uint64_t seed);

double thick_points(const FieldGrid& f, double gamma);
double free_energy_stat(const FieldGrid& f, double gamma);
double field_max_stat(const FieldGrid& f);

}  // namespace fhlab
