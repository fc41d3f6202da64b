#include "fhlab/moments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fhlab/errors.hpp"
#include "fhlab/logsum.hpp"
#include "fhlab/parallel.hpp"
#include "fhlab/quadrature.hpp"

namespace fhlab {

using cplx = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;

double log_half_lap(const PotentialSpec& v, cplx z) { return std::log(v.laplacian(z) / 4.0); }

}  // namespace

void validate_query(const MomentQuery& q, const Droplet& d, const PotentialSpec& v) {
  if (q.n < 2) throw DomainError("moment query needs n >= 2");
  if (!(q.kappa > 0 && q.kappa < 0.5)) throw DomainError("kappa must lie in (0, 1/2)");
  if (d.shape != DropletShape::Disk) throw DomainError("moment queries need a disk droplet");
  const double thr = std::pow(static_cast<double>(q.n), -0.5 + q.kappa);
  const auto& s = q.singularities;
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (!(s[j].gamma >= 0) || !std::isfinite(s[j].gamma))
      throw DomainError("singularity exponents must be finite and nonnegative");
    if (d.radius - std::abs(s[j].zeta) <= thr)
      throw HypothesisViolation("singularity within n^{-1/2+kappa} of the droplet boundary");
    if (!(v.laplacian(s[j].zeta) > 0))
      throw HypothesisViolation("Laplacian of the potential vanishes at a singularity");
    for (std::size_t k = 0; k < j; ++k)
      if (std::abs(s[j].zeta - s[k].zeta) <= thr)
        throw HypothesisViolation("singularities closer than n^{-1/2+kappa}");
  }
  if (q.test_fn.scale() < thr) throw HypothesisViolation("test function narrower than n^{-1/2+kappa}");
}

DiskIntegrals disk_integrals(const TestFn& f, const EquilibriumMeasure& mu) {
  DiskIntegrals out;
  const double big_r = mu.droplet.radius;
  const double c = f.offset;
  switch (f.kind) {
    case TestFnKind::Zero:
      out.mass = c;
      out.boundary_mean = c;
      return out;
    case TestFnKind::HarmonicRe: {
      const double a = f.amplitude.real();
      const double rk2 = std::pow(big_r, 2 * f.k);
      out.mass = c;
      out.dirichlet = kPi * a * a * f.k * rk2;
      out.exterior = kPi * a * a * f.k * rk2;
      out.boundary_mean = c;
      return out;
    }
    case TestFnKind::Monomial: throw DomainError("moment test functions must be real valued");
    default: break;
  }
  const double l_edge = std::log(mu.potential.lap_r(big_r) / 4.0);
  auto dens = [&](cplx z) { return mu.density(std::abs(z)); };
  auto lfun = [&](cplx z) {
    const double lap = mu.potential.lap_r(std::abs(z));
    return lap > 0 ? std::log(lap / 4.0) - l_edge : 0.0;
  };
  auto over_support = [&](auto&& g) {
    const double rho = f.support_radius();
    if (std::abs(f.center) + rho < big_r) return integrate_disk(g, f.center, rho, 1e-11, 1e-15);
    return integrate_disk([&](cplx z) { return g(z); }, 0.0, big_r, 1e-11, 1e-15);
  };
  out.mass = over_support([&](cplx z) { return (f.value(z) - c) * dens(z); }) + c;
  out.dirichlet = over_support([&](cplx z) { return std::norm(f.gradient(z)); });
  out.laplace = over_support([&](cplx z) { return f.laplacian(z); });
  out.laplace_l = over_support([&](cplx z) { return f.laplacian(z) * lfun(z); });
  if (std::abs(f.center) + f.support_radius() < big_r) {
    out.boundary_mean = c;
    out.exterior = 0.0;
  } else {
    const HarmonicExtension ext =
        harmonic_extension(mu.droplet, [&](cplx z) { return f.value(z); }, 256);
    out.boundary_mean = ext.value_at_infinity();
    out.exterior = ext.exterior_dirichlet_energy();
  }
  return out;
}

LogValue fh_rhs_ginibre(const MomentQuery& q) {
  const PotentialSpec v = PotentialSpec::ginibre();
  const Droplet d = Droplet::disk(1.0);
  validate_query(q, d, v);
  const double n = q.n;
  const double ln_n = std::log(n);
  double s = 0.0;
  const TestFn& f = q.test_fn;
  const bool has_f = !f.is_zero();
  double fhat0 = 0.0;
  if (has_f) {
    const DiskIntegrals di = disk_integrals(f, EquilibriumMeasure{d, v});
    const double h_half = di.exterior / (2 * kPi);
    s += n * di.mass + di.dirichlet / (8 * kPi) + 0.25 * h_half + di.laplace / (8 * kPi);
    fhat0 = di.boundary_mean;
  }
  const auto& sg = q.singularities;
  for (const auto& p : sg) {
    const double g = p.gamma;
    if (g == 0) continue;
    if (has_f) s += 0.5 * g * (fhat0 - f.value(p.zeta));
    s += 0.5 * g * n * (std::norm(p.zeta) - 1.0);
    s += g * g / 8 * ln_n + g / 4 * std::log(2 * kPi) - log_barnes_g(1 + g / 2);
  }
  for (std::size_t j = 0; j < sg.size(); ++j)
    for (std::size_t k = 0; k < j; ++k)
      s -= 0.5 * sg[j].gamma * sg[k].gamma * std::log(std::abs(sg[j].zeta - sg[k].zeta));
  return {s};
}

LogValue fh_rhs_general(const PotentialSpec& v, const MomentQuery& q) {
  if (!v.radial()) throw DomainError("fh_rhs_general needs a radial potential");
  const auto [d, mu] = equilibrium_droplet(v);
  validate_query(q, d, v);
  const double n = q.n;
  const double ln_n = std::log(n);
  const double cap = capacity(d);
  const double l_inf = log_half_lap(v, d.radius);
  double s = 0.0;
  const TestFn& f = q.test_fn;
  const bool has_f = !f.is_zero();
  double omega_f = 0.0;
  if (has_f) {
    const DiskIntegrals di = disk_integrals(f, mu);
    s += n * di.mass + (di.dirichlet + di.exterior + di.laplace + di.laplace_l) / (8 * kPi);
    omega_f = di.boundary_mean;
  }
  const auto& sg = q.singularities;
  for (const auto& p : sg) {
    const double g = p.gamma;
    if (g == 0) continue;
    const double lz = log_half_lap(v, p.zeta);
    if (has_f) s += 0.5 * g * (omega_f - f.value(p.zeta));
    s += g * n * eq_log_potential(mu, p.zeta);
    s += g * g / 8 * ln_n + g / 4 * std::log(2 * kPi) - log_barnes_g(1 + g / 2);
    s += g / 4 * (lz - l_inf) + g * g / 8 * (lz + 2 * cap);
  }
  for (std::size_t j = 0; j < sg.size(); ++j)
    for (std::size_t k = 0; k < j; ++k) {
      const double gg = sg[j].gamma * sg[k].gamma;
      s += -0.5 * gg * std::log(std::abs(sg[j].zeta - sg[k].zeta)) + 0.5 * gg * cap;
    }
  return {s};
}

double moment_log_weight(const Spectrum& sp, const MomentQuery& q) {
  if (sp.moduli_only) {
    bool ok = q.test_fn.is_radial();
    for (const auto& p : q.singularities) ok = ok && p.zeta == cplx(0, 0);
    if (!ok) throw DomainError("moduli-only spectra support only origin singularities and radial f");
  }
  double w = 0.0;
  if (!q.test_fn.is_zero())
    for (const cplx& z : sp.points) w += q.test_fn.value(z);
  for (const auto& p : q.singularities)
    if (p.gamma != 0) w += p.gamma * sum_log_dist(sp.points.data(), sp.points.size(), p.zeta);
  return w;
}

MCEstimate log_mean_exp(const std::vector<double>& w) {
  const std::size_t m = w.size();
  if (m < 1) throw DomainError("need at least one sample");
  MCEstimate e;
  e.samples = m;
  const double mx = *std::max_element(w.begin(), w.end());
  if (!std::isfinite(mx)) throw DegenerateEstimate("non-finite log weight");
  if (std::all_of(w.begin(), w.end(), [&](double x) { return x == mx; })) {
    e.log_mean = mx;
    e.ess = static_cast<double>(m);
    return e;
  }
  std::vector<double> ex(m);
  double sum = 0.0, sum2 = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    ex[i] = std::exp(w[i] - mx);
    sum += ex[i];
    sum2 += ex[i] * ex[i];
  }
  e.ess = sum * sum / sum2;
  if (e.ess < 10) throw DegenerateEstimate("effective sample size below 10");
  e.log_mean = mx + std::log(sum / m);
  std::vector<double> loo(m);
  double mean = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    loo[i] = mx + std::log((sum - ex[i]) / (m - 1));
    mean += loo[i];
  }
  mean /= m;
  double var = 0.0;
  for (double x : loo) var += (x - mean) * (x - mean);
  e.rel_stderr = std::sqrt(var * (m - 1) / m);
  return e;
}

MCEstimate mc_moment(const std::vector<Spectrum>& spectra, const MomentQuery& q, unsigned threads) {
  std::vector<double> w(spectra.size());
  parallel_for(spectra.size(), threads, [&](std::size_t i) { w[i] = moment_log_weight(spectra[i], q); });
  return log_mean_exp(w);
}

cplx ward_statistic(const Spectrum& sp, const TestFn& h, const PotentialSpec& v) {
  if (sp.moduli_only) throw DomainError("Ward statistic needs full points");
  const auto& z = sp.points;
  const std::size_t m = z.size();
  std::vector<cplx> hv(m);
  for (std::size_t j = 0; j < m; ++j) hv[j] = h.eval(z[j]);
  cplx pair = 0.0, self = 0.0, drift = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t k = j + 1; k < m; ++k) {
      const cplx d = z[j] - z[k];
      if (d == cplx(0, 0)) throw CoincidentPoints("coincident points in Ward statistic");
      pair += (hv[j] - hv[k]) / d;
    }
    self += h.del(z[j]);
    drift += hv[j] * v.dV(z[j]);
  }
  return pair + self - double(sp.n) * drift;
}

cplx isotropy_statistic(const Spectrum& sp, const TestFn& g, double delta) {
  if (sp.moduli_only) throw DomainError("isotropy statistic needs full points");
  if (!(delta > 0)) throw DomainError("delta must be positive");
  const auto& z = sp.points;
  const double id2 = 1.0 / (delta * delta);
  cplx s = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const cplx gi = g.eval(z[i]);
    if (gi == cplx(0, 0)) continue;
    cplx row = 0.0;
    for (std::size_t j = 0; j < z.size(); ++j) {
      const cplx d = z[i] - z[j];
      const double r2 = std::norm(d);
      if (r2 == 0) continue;
      const double e = std::exp(-r2 * id2);
      if (e == 0) continue;
      row += std::conj(d) * std::conj(d) / r2 * e;
    }
    s += gi * row;
  }
  return s;
}

double linear_stat_variance_prediction(const TestFn& f) {
  const PotentialSpec v = PotentialSpec::ginibre();
  const Droplet d = Droplet::disk(1.0);
  const DiskIntegrals di = disk_integrals(f, EquilibriumMeasure{d, v});
  return di.dirichlet / (4 * kPi) + 0.5 * di.exterior / (2 * kPi);
}

}  // namespace fhlab
