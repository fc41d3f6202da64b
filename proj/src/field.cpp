#include "fhlab/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "fhlab/errors.hpp"
#include "fhlab/logsum.hpp"
#include "fhlab/moments.hpp"
#include "fhlab/parallel.hpp"
#include "fhlab/quadrature.hpp"
#include "fhlab/rng.hpp"

namespace fhlab {

using cplx = std::complex<double>;

cplx GridGeometry::node(int idx) const {
  const int i = idx % resolution;
  const int j = idx / resolution;
  const double hx = (region.x1 - region.x0) / resolution;
  const double hy = (region.y1 - region.y0) / resolution;
  return {region.x0 + (i + 0.5) * hx, region.y0 + (j + 0.5) * hy};
}

double GmcSample::total() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

double GmcSample::mass(const Rect& r) const {
  double s = 0.0;
  for (int i = 0; i < grid.size(); ++i) {
    const cplx z = grid.node(i);
    if (z.real() >= r.x0 && z.real() <= r.x1 && z.imag() >= r.y0 && z.imag() <= r.y1) s += weights[i];
  }
  return s;
}

double field_centering(const PotentialSpec& v, cplx z, int n) {
  if (v.kind == PotentialKind::Ginibre) {
    const double r2 = std::norm(z);
    return n * (r2 < 1 ? 0.5 * (r2 - 1) : 0.5 * std::log(r2)) + 0.25;
  }
  const auto [d, mu] = equilibrium_droplet(v);
  const double l_edge = std::log(v.lap_r(d.radius) / 4);
  return n * eq_log_potential(mu, z) + 0.25 + 0.25 * (std::log(v.laplacian(z) / 4) - l_edge);
}

namespace {

void check_region(const GridGeometry& g, const PotentialSpec& v) {
  if (g.resolution < 1) throw DomainError("grid resolution must be positive");
  if (!(g.region.x1 > g.region.x0 && g.region.y1 > g.region.y0)) throw DomainError("empty grid region");
  if (!v.radial()) return;
  const double big_r = equilibrium_droplet(v).first.radius;
  const Rect& r = g.region;
  for (cplx c : {cplx(r.x0, r.y0), cplx(r.x0, r.y1), cplx(r.x1, r.y0), cplx(r.x1, r.y1)})
    if (std::abs(c) > big_r - 0.1) throw DomainError("field region must keep a 0.1 margin from the droplet edge");
}

std::vector<double> analytic_centering(const GridGeometry& g, const PotentialSpec& v, int n) {
  std::vector<double> c(g.size());
  for (int i = 0; i < g.size(); ++i) c[i] = field_centering(v, g.node(i), n);
  return c;
}

double node_sum(const std::vector<cplx>& p, cplx z, double& min_d2) {
  double acc = 0.0, prod = 1.0;
  int cnt = 0;
  double md = std::numeric_limits<double>::infinity();
  bool fallback = false;
  for (const cplx& w : p) {
    const double d2 = std::norm(z - w);
    md = std::min(md, d2);
    prod *= d2;
    if (++cnt == 8) {
      if (prod > 1e-290 && prod < 1e290) acc += std::log(prod);
      else fallback = true;
      prod = 1.0;
      cnt = 0;
    }
  }
  min_d2 = md;
  if (fallback) return sum_log_dist(p.data(), p.size(), z);
  return 0.5 * (acc + std::log(prod));
}

}  // namespace

std::vector<double> uncentered_field(const Spectrum& s, const GridGeometry& g, std::vector<int>* jittered) {
  if (s.moduli_only) throw DomainError("field evaluation needs full points");
  std::vector<double> out(g.size());
  for (int i = 0; i < g.size(); ++i) {
    cplx z = g.node(i);
    double md;
    out[i] = node_sum(s.points, z, md);
    if (md < 1e-28) {
      z += 1e-12;
      out[i] = node_sum(s.points, z, md);
      if (jittered) jittered->push_back(i);
    }
  }
  return out;
}

std::vector<double> empirical_centering(const std::vector<Spectrum>& batch, const GridGeometry& g,
                                        unsigned threads) {
  if (batch.empty()) throw DomainError("empirical centering needs a nonempty batch");
  std::vector<std::vector<double>> fields(batch.size());
  parallel_for(batch.size(), threads, [&](std::size_t i) { fields[i] = uncentered_field(batch[i], g); });
  std::vector<double> mean(g.size(), 0.0);
  for (const auto& f : fields)
    for (int i = 0; i < g.size(); ++i) mean[i] += f[i];
  for (double& m : mean) m /= static_cast<double>(batch.size());
  return mean;
}

FieldGrid eval_field(const Spectrum& s, const GridGeometry& g, const PotentialSpec& v, Centering mode,
                     const std::vector<double>* empirical_mean) {
  check_region(g, v);
  FieldGrid f;
  f.grid = g;
  f.n = s.n;
  f.centering = mode;
  f.values = uncentered_field(s, g, &f.jittered);
  if (mode == Centering::EmpiricalMean) {
    if (!empirical_mean || static_cast<int>(empirical_mean->size()) != g.size())
      throw DomainError("empirical centering requires a mean field on the same grid");
    f.center = *empirical_mean;
  } else {
    f.center = analytic_centering(g, v, s.n);
  }
  for (int i = 0; i < g.size(); ++i) f.values[i] -= f.center[i];
  return f;
}

CltCovariance clt_covariance(const std::vector<Spectrum>& batch, const std::vector<cplx>& zetas,
                             double kappa) {
  if (batch.size() < 2) throw DomainError("CLT covariance needs at least two spectra");
  const int m = static_cast<int>(zetas.size());
  const int n = batch.front().n;
  const double ln_n = std::log(static_cast<double>(n));
  const double thr = std::pow(static_cast<double>(n), -0.5 + kappa);
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < j; ++k)
      if (std::abs(zetas[j] - zetas[k]) < thr)
        throw HypothesisViolation("CLT points closer than n^{-1/2+kappa}");
  const std::size_t ns = batch.size();
  Eigen::MatrixXd x(ns, m);
  for (std::size_t s = 0; s < ns; ++s) {
    const Spectrum& sp = batch[s];
    if (sp.moduli_only)
      for (const cplx& z : zetas)
        if (z != cplx(0, 0)) throw DomainError("moduli-only spectra support only zeta = 0");
    for (int j = 0; j < m; ++j) x(s, j) = sum_log_dist(sp.points.data(), sp.points.size(), zetas[j]);
  }
  Eigen::RowVectorXd mean = x.colwise().mean();
  Eigen::MatrixXd c = x.rowwise() - mean;
  CltCovariance out;
  out.empirical = (c.transpose() * c) / (double(ns - 1) * ln_n);
  out.predicted = Eigen::MatrixXd::Zero(m, m);
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k)
      out.predicted(j, k) =
          j == k ? 0.25
                 : std::clamp(-std::log(std::abs(zetas[j] - zetas[k])) / (2 * ln_n), 0.0, 0.25);
  return out;
}

std::vector<double> gmc_log_normalizers(const GridGeometry& g, double gamma, const PotentialSpec& v,
                                        int n) {
  std::vector<double> out(g.size());
  for (int i = 0; i < g.size(); ++i) {
    MomentQuery q;
    q.n = n;
    q.singularities = {{g.node(i), gamma}};
    out[i] = (v.kind == PotentialKind::Ginibre ? fh_rhs_ginibre(q) : fh_rhs_general(v, q)).log_magnitude;
  }
  return out;
}

GmcSample matrix_gmc_measure(const FieldGrid& field, double gamma, const PotentialSpec& v) {
  if (gamma >= 2 * std::numbers::sqrt2) throw PhaseError("gamma must be below 2 sqrt 2");
  if (!(gamma >= 0)) throw DomainError("gamma must be nonnegative");
  GmcSample out;
  out.grid = field.grid;
  const double area = field.grid.cell_area();
  out.weights.assign(field.grid.size(), area);
  if (gamma == 0) return out;
  const std::vector<double> den = gmc_log_normalizers(field.grid, gamma, v, field.n);
  for (int i = 0; i < field.grid.size(); ++i)
    out.weights[i] = area * std::exp(gamma * (field.values[i] + field.center[i]) - den[i]);
  return out;
}

// ------------------------------------------------------------ reference GMC

double mollified_log_covariance(double d, double eps) {
  if (!(eps > 0)) throw DomainError("mollifier scale must be positive");
  if (d >= 2 * eps) return -std::log(d);
  // -E log|d + eps (U - U')| with U, U' iid from the bump; the U' average
  // is the singly mollified log.
  const MollifierParams p{eps};
  auto ring = [&](double s) {
    if (s == 0) return 0.0;
    auto ang = [&](double t) { return mollified_log(p, d + eps * std::polar(s, t)); };
    return bump(s * s) * s * integrate(ang, 0.0, std::numbers::pi, 1e-11, 1e-14, 10);
  };
  const double num = integrate(ring, 0.0, 1.0, 1e-11, 1e-14, 12);
  const double den = integrate([](double s) { return bump(s * s) * s; }, 0.0, 1.0, 1e-14);
  return -num / (std::numbers::pi * den);
}

ReferenceGmc::ReferenceGmc(const GridGeometry& g, double gamma_prime, double s, double epsilon)
    : grid_(g), gamma_prime_(gamma_prime) {
  if (!(gamma_prime >= 0 && gamma_prime < 2)) throw DomainError("reference chaos needs 0 <= gamma' < 2");
  const double hx = (g.region.x1 - g.region.x0) / g.resolution;
  const double hy = (g.region.y1 - g.region.y0) / g.resolution;
  if (!(epsilon >= 2 * std::max(hx, hy) * (1 - 1e-12)))
    throw DomainError("mollification scale must be at least twice the grid spacing");
  const int m = g.size();
  const int res = g.resolution;
  std::vector<double> table(static_cast<std::size_t>(res) * res);
  for (int a = 0; a < res; ++a)
    for (int b = 0; b < res; ++b) {
      if (hx == hy && b < a) {
        table[a * res + b] = table[b * res + a];
        continue;
      }
      table[a * res + b] = mollified_log_covariance(std::hypot(a * hx, b * hy), epsilon) + s;
    }
  cov_.resize(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const int a = std::abs(i % res - j % res);
      const int b = std::abs(i / res - j / res);
      cov_(i, j) = table[a * res + b];
    }
  Eigen::MatrixXd jit = cov_;
  jit.diagonal().array() += 1e-10;
  Eigen::LLT<Eigen::MatrixXd> llt(jit);
  if (llt.info() != Eigen::Success)
    throw NotPositiveDefinite("covariance factorization failed; epsilon too small for the grid");
  chol_ = llt.matrixL();
}

Eigen::VectorXd ReferenceGmc::gaussian_layer(std::uint64_t seed) const {
  Rng rng = make_stream(seed, 0);
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::VectorXd xi(chol_.rows());
  for (int i = 0; i < xi.size(); ++i) xi(i) = g(rng);
  Eigen::VectorXd y = chol_.triangularView<Eigen::Lower>() * xi;
  return gamma_prime_ * y;
}

GmcSample ReferenceGmc::sample(std::uint64_t seed) const {
  GmcSample out;
  out.grid = grid_;
  const double area = grid_.cell_area();
  out.weights.assign(grid_.size(), area);
  if (gamma_prime_ == 0) return out;
  const Eigen::VectorXd y = gaussian_layer(seed);
  for (int i = 0; i < grid_.size(); ++i) {
    const double var = chol_.row(i).head(i + 1).squaredNorm();
    out.weights[i] = area * std::exp(y(i) - 0.5 * gamma_prime_ * gamma_prime_ * var);
  }
  return out;
}

GmcSample reference_gmc_sample(const GridGeometry& g, double gamma_prime, double s, double epsilon,
                               std::uint64_t seed) {
  return ReferenceGmc(g, gamma_prime, s, epsilon).sample(seed);
}

// ----------------------------------------------------------- scaling laws

double thick_points(const FieldGrid& f, double gamma) {
  if (!(gamma >= 0 && gamma < 1 / std::numbers::sqrt2)) throw DomainError("thick points need 0 <= gamma < 1/sqrt 2");
  const double thr = gamma * std::log(static_cast<double>(f.n));
  long cnt = 0;
  for (double x : f.values) cnt += (x >= thr);
  return cnt * f.grid.cell_area();
}

double free_energy_stat(const FieldGrid& f, double gamma) {
  if (!(gamma > 0)) throw DomainError("free energy needs gamma > 0");
  const double mx = *std::max_element(f.values.begin(), f.values.end());
  double s = 0.0;
  for (double x : f.values) s += std::exp(gamma * (x - mx));
  const double ln_n = std::log(static_cast<double>(f.n));
  return (ln_n + std::log(f.grid.cell_area()) + gamma * mx + std::log(s)) / (gamma * ln_n);
}

double field_max_stat(const FieldGrid& f) {
  return *std::max_element(f.values.begin(), f.values.end()) / std::log(static_cast<double>(f.n));
}

}  // namespace fhlab
