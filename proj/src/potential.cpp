#include "fhlab/potential.hpp"

#include <Eigen/Dense>
#include <boost/math/interpolators/cardinal_quintic_b_spline.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "fhlab/errors.hpp"
#include "fhlab/parallel.hpp"
#include "fhlab/quadrature.hpp"
#include "fhlab/rng.hpp"

namespace fhlab {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2 * std::numbers::pi;
}  // namespace

// ---------------------------------------------------------------- potential

PotentialSpec PotentialSpec::ginibre() { return PotentialSpec{}; }

PotentialSpec PotentialSpec::radial_even(std::vector<double> a) {
  PotentialSpec p;
  p.kind = PotentialKind::RadialEven;
  while (a.size() > 1 && a.back() == 0.0) a.pop_back();
  p.coeffs = std::move(a);
  p.validate();
  if (p.coeffs.size() == 2 && p.coeffs[0] == 0.0 && p.coeffs[1] == 1.0) p.kind = PotentialKind::Ginibre;
  return p;
}

PotentialSpec PotentialSpec::custom(std::function<double(cplx)> v, std::function<cplx(cplx)> dv,
                                    std::function<double(cplx)> lap) {
  PotentialSpec p;
  p.kind = PotentialKind::Custom;
  p.coeffs.clear();
  p.custom_v = std::move(v);
  p.custom_dv = std::move(dv);
  p.custom_lap = std::move(lap);
  p.validate();
  return p;
}

void PotentialSpec::validate() const {
  if (kind == PotentialKind::Custom) {
    if (!custom_v || !custom_dv || !custom_lap)
      throw DomainError("custom potential needs V, dV and Laplacian evaluators");
    return;
  }
  if (coeffs.size() < 2) throw DomainError("radial potential needs at least one r^{2k} term with k >= 1");
  if (!(coeffs.back() > 0)) throw DomainError("leading coefficient of the potential must be positive");
  for (double c : coeffs)
    if (!std::isfinite(c)) throw DomainError("potential coefficients must be finite");
}

double PotentialSpec::v(double r) const {
  const double r2 = r * r;
  double s = 0.0, p = 1.0;
  for (double a : coeffs) {
    s += a * p;
    p *= r2;
  }
  return s;
}

double PotentialSpec::dv(double r) const {
  const double r2 = r * r;
  double s = 0.0, p = r;
  for (std::size_t k = 1; k < coeffs.size(); ++k) {
    s += 2.0 * k * coeffs[k] * p;
    p *= r2;
  }
  return s;
}

double PotentialSpec::d2v(double r) const {
  const double r2 = r * r;
  double s = 0.0, p = 1.0;
  for (std::size_t k = 1; k < coeffs.size(); ++k) {
    s += 2.0 * k * (2.0 * k - 1.0) * coeffs[k] * p;
    p *= r2;
  }
  return s;
}

double PotentialSpec::lap_r(double r) const {
  const double r2 = r * r;
  double s = 0.0, p = 1.0;
  for (std::size_t k = 1; k < coeffs.size(); ++k) {
    s += 4.0 * k * k * coeffs[k] * p;
    p *= r2;
  }
  return s;
}

double PotentialSpec::V(cplx z) const {
  if (kind == PotentialKind::Custom) return custom_v(z);
  return v(std::abs(z));
}

cplx PotentialSpec::dV(cplx z) const {
  if (kind == PotentialKind::Custom) return custom_dv(z);
  const double r2 = std::norm(z);
  double s = 0.0, p = 1.0;
  for (std::size_t k = 1; k < coeffs.size(); ++k) {
    s += double(k) * coeffs[k] * p;
    p *= r2;
  }
  return s * std::conj(z);
}

double PotentialSpec::laplacian(cplx z) const {
  if (kind == PotentialKind::Custom) return custom_lap(z);
  return lap_r(std::abs(z));
}

cplx PotentialSpec::gradient(cplx z) const { return 2.0 * std::conj(dV(z)); }

cplx PotentialSpec::polarized(cplx z, cplx w) const {
  if (!radial()) throw DomainError("polarization needs a radial potential");
  const cplx u = z * std::conj(w);
  cplx s = 0.0, p = 1.0;
  for (double a : coeffs) {
    s += a * p;
    p *= u;
  }
  return s;
}

cplx PotentialSpec::polarized_d12(cplx z, cplx w) const {
  if (!radial()) throw DomainError("polarization needs a radial potential");
  const cplx u = z * std::conj(w);
  cplx s = 0.0, p = 1.0;
  for (std::size_t k = 1; k < coeffs.size(); ++k) {
    s += double(k * k) * coeffs[k] * p;
    p *= u;
  }
  return s;
}

std::string PotentialSpec::describe() const {
  if (kind == PotentialKind::Custom) return "custom";
  if (kind == PotentialKind::Ginibre) return "ginibre";
  std::ostringstream os;
  os << "radial_even[";
  for (std::size_t k = 0; k < coeffs.size(); ++k) os << (k ? "," : "") << coeffs[k];
  os << "]";
  return os.str();
}

// ------------------------------------------------------------------ droplet

Droplet Droplet::disk(double r) {
  if (!(r > 0)) throw DomainError("disk radius must be positive");
  Droplet d;
  d.shape = DropletShape::Disk;
  d.radius = r;
  d.laurent = {cplx(r, 0), cplx(0, 0)};
  d.capacity_log = std::log(r);
  return d;
}

Droplet Droplet::exterior_map(std::vector<cplx> coeffs) {
  if (coeffs.empty() || !(coeffs[0].real() > 0) || std::abs(coeffs[0].imag()) > 1e-14)
    throw DomainError("exterior map needs a positive leading coefficient c1");
  Droplet d;
  d.shape = DropletShape::ExteriorMap;
  if (coeffs.size() < 2) coeffs.push_back(0.0);
  d.laurent = std::move(coeffs);
  d.radius = 0.0;
  for (int i = 0; i < 512; ++i)
    d.radius = std::max(d.radius, std::abs(d.boundary_point(kTwoPi * i / 512) - d.laurent[1]));
  d.capacity_log = std::log(d.laurent[0].real());
  return d;
}

Droplet Droplet::ellipse(double a, double b) {
  if (!(a > 0 && b > 0)) throw DomainError("ellipse semi-axes must be positive");
  return exterior_map({cplx(0.5 * (a + b), 0), cplx(0, 0), cplx(0.5 * (a - b), 0)});
}

cplx Droplet::psi(cplx w) const {
  if (shape == DropletShape::Disk) return radius * w;
  cplx s = laurent[0] * w + laurent[1];
  const cplx iw = 1.0 / w;
  cplx p = iw;
  for (std::size_t m = 2; m < laurent.size(); ++m) {
    s += laurent[m] * p;
    p *= iw;
  }
  return s;
}

cplx Droplet::dpsi(cplx w) const {
  if (shape == DropletShape::Disk) return radius;
  cplx s = laurent[0];
  const cplx iw = 1.0 / w;
  cplx p = iw * iw;
  for (std::size_t m = 2; m < laurent.size(); ++m) {
    s -= double(m - 1) * laurent[m] * p;
    p *= iw;
  }
  return s;
}

cplx Droplet::phi(cplx z, cplx guess) const {
  if (shape == DropletShape::Disk) return z / radius;
  cplx w = (guess == cplx(0, 0)) ? (z - laurent[1]) / laurent[0] : guess;
  if (std::abs(w) < 1e-3) w = 1e-3;
  for (int it = 0; it < 100; ++it) {
    const cplx dw = (psi(w) - z) / dpsi(w);
    w -= dw;
    if (std::abs(dw) <= 1e-15 * std::max(1.0, std::abs(w))) return w;
  }
  if (std::abs(psi(w) - z) <= 1e-10 * std::max(1.0, std::abs(z))) return w;
  throw ConvergenceError("inverse exterior map did not converge");
}

double Droplet::diameter() const {
  if (shape == DropletShape::Disk) return 2 * radius;
  const int m = 256;
  std::vector<cplx> b(m);
  for (int i = 0; i < m; ++i) b[i] = boundary_point(kTwoPi * i / m);
  double d = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) d = std::max(d, std::abs(b[i] - b[j]));
  return d;
}

bool Droplet::contains(cplx z) const {
  if (shape == DropletShape::Disk) return std::abs(z) <= radius;
  return std::abs(phi(z)) <= 1.0;
}

double EquilibriumMeasure::density(double r) const {
  if (r > droplet.radius) return 0.0;
  return potential.lap_r(r) / (4 * kPi);
}

double EquilibriumMeasure::mass_within(double r) const {
  r = std::min(r, droplet.radius);
  return 0.5 * r * potential.dv(r);
}

std::pair<Droplet, EquilibriumMeasure> equilibrium_droplet(const PotentialSpec& v) {
  if (!v.radial()) throw DomainError("equilibrium_droplet needs a radial potential");
  v.validate();
  auto mass = [&](double r) { return 0.5 * r * v.dv(r); };
  double hi = 1.0;
  while (mass(hi) < 1.0) {
    hi *= 2;
    if (hi > 1e8) throw NoRootError("normalization of the equilibrium measure has no root");
  }
  double lo = 0.0;
  while (hi - lo > 1e-12 * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    (mass(mid) < 1.0 ? lo : hi) = mid;
  }
  const double r = 0.5 * (lo + hi);
  for (int i = 1; i <= 64; ++i)
    if (!(v.lap_r(r * i / 64.0) > 0))
      throw DomainError("Laplacian of the potential is not positive on the droplet");
  Droplet d = Droplet::disk(r);
  return {d, EquilibriumMeasure{d, v}};
}

double eq_log_potential(const EquilibriumMeasure& mu, cplx zeta) {
  const double rho = std::abs(zeta);
  const double big_r = mu.droplet.radius;
  if (rho >= big_r) return std::log(rho);
  auto dens = [&](double r) { return 0.5 * r * mu.potential.lap_r(r); };
  double inner = rho > 0 ? std::log(rho) * mu.mass_within(rho) : 0.0;
  auto g = [&](double r) { return r > 0 ? std::log(r) * dens(r) : 0.0; };
  return inner + integrate(g, rho, big_r, 1e-12, 1e-13);
}

// ----------------------------------------------------------------- capacity

double capacity(const Droplet& d) { return d.capacity_log; }

double capacity_energy(const Droplet& d, int points) {
  if (points < 8 || points % 2) throw DomainError("capacity_energy needs an even point count >= 8");
  const int m = points;
  std::vector<cplx> p(m);
  std::vector<double> th(m);
  for (int i = 0; i < m; ++i) {
    th[i] = kTwoPi * i / m;
    p[i] = d.boundary_point(th[i]);
  }
  // -log|2 sin(x/2)| = sum_{j>=1} cos(jx)/j, truncated to the resolvable band.
  std::vector<double> k1(m);
  for (int s = 0; s < m; ++s) {
    const double x = kTwoPi * s / m;
    double acc = 0.0;
    for (int j = 1; j < m / 2; ++j) acc += std::cos(j * x) / j;
    acc += std::cos(0.5 * m * x) / m;
    k1[s] = acc;
  }
  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(m + 1, m + 1);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      double smooth;
      if (i == j) {
        smooth = -std::log(std::abs(d.dpsi(std::polar(1.0, th[i]))));
      } else {
        smooth = -std::log(std::abs(p[i] - p[j])) +
                 std::log(std::abs(2 * std::sin(0.5 * (th[i] - th[j]))));
      }
      kkt(i, j) = k1[(i - j + m) % m] + smooth;
    }
    kkt(i, m) = 1.0;
    kkt(m, i) = 1.0;
  }
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m + 1);
  rhs(m) = 1.0;
  Eigen::VectorXd sol = kkt.fullPivLu().solve(rhs);
  Eigen::VectorXd w = sol.head(m);
  const double energy = w.dot(kkt.topLeftCorner(m, m) * w);
  return -energy;
}

double harmonic_measure_density(const Droplet&, double) { return 1.0 / kTwoPi; }

double harmonic_measure_arclength(const Droplet& d, double theta) {
  return 1.0 / (kTwoPi * std::abs(d.dpsi(std::polar(1.0, theta))));
}

// ---------------------------------------------------------------- brownian

HittingHistogram brownian_hitting_estimate(const Droplet& d, long walkers, double start_radius,
                                           double step, std::uint64_t seed, unsigned threads,
                                           int bins) {
  const double diam = d.diameter();
  if (walkers < 1) throw DomainError("need at least one walker");
  if (!(start_radius > 3 * diam)) throw DomainError("start radius must exceed 3 droplet diameters");
  if (!(step > 0 && step <= 1e-2 * diam)) throw DomainError("step must lie in (0, 0.01 diameter]");
  constexpr long kCap = 100000000L;
  const double far = 2 * start_radius;
  const bool is_disk = d.shape == DropletShape::Disk;
  const cplx center = d.laurent[1];

  HittingHistogram out;
  out.hits.assign(walkers, 0.0);
  std::vector<long> steps(walkers, 0);

  parallel_for(static_cast<std::size_t>(walkers), threads, [&](std::size_t idx) {
    Rng rng = make_stream(seed, idx);
    std::uniform_real_distribution<double> uni(0.0, kTwoPi);
    std::normal_distribution<double> gauss(0.0, 1.0);
    cplx z = center + std::polar(start_radius, uni(rng));
    cplx w(0, 0);
    long n = 0;
    for (;;) {
      if (++n > kCap) throw NonTerminationError("Brownian walker exceeded the step cap");
      const cplx rel = z - center;
      if (std::abs(rel) > far) {
        // Exact exterior harmonic measure on |y| = start_radius seen from rel.
        const cplx a = start_radius / std::conj(rel);
        const cplx u = std::polar(1.0, uni(rng));
        z = center + start_radius * (u + a) / (1.0 + std::conj(a) * u);
        w = 0;
        continue;
      }
      w = d.phi(z, w);
      const double aw = std::abs(w);
      if (aw <= 1.0) {
        double t = std::arg(w);
        if (t < 0) t += kTwoPi;
        out.hits[idx] = t;
        break;
      }
      const double lb = is_disk ? std::abs(z) - d.radius : 0.25 * (aw - 1.0) * std::abs(d.dpsi(w));
      if (lb > 4 * step) {
        z += std::polar(lb, uni(rng));
      } else {
        z += step * cplx(gauss(rng), gauss(rng));
      }
    }
    steps[idx] = n;
  });

  out.counts.assign(bins, 0);
  for (double t : out.hits) {
    int b = static_cast<int>(t / kTwoPi * bins);
    out.counts[std::clamp(b, 0, bins - 1)]++;
  }
  for (long s : steps) out.total_steps += s;
  return out;
}

// -------------------------------------------------------- harmonic extension

FourierData FourierData::from_samples(const std::function<double(double)>& f, int kmax,
                                      int oversample) {
  const int m = std::max(8, oversample * (2 * kmax + 1));
  std::vector<double> vals(m);
  std::vector<cplx> tw(m);
  for (int j = 0; j < m; ++j) {
    vals[j] = f(kTwoPi * j / m);
    tw[j] = std::polar(1.0, -kTwoPi * j / m);
  }
  FourierData out;
  out.kmax = kmax;
  out.coeffs.assign(2 * kmax + 1, 0.0);
  for (int k = -kmax; k <= kmax; ++k) {
    cplx acc = 0.0;
    const long kk = ((k % m) + m) % m;
    for (int j = 0; j < m; ++j) acc += vals[j] * tw[(kk * j) % m];
    out.coeffs[k + kmax] = acc / double(m);
  }
  return out;
}

HarmonicExtension harmonic_extension(const Droplet& d, const FourierData& data) {
  HarmonicExtension e;
  e.droplet = d;
  e.data = data;
  return e;
}

HarmonicExtension harmonic_extension(const Droplet& d, const std::function<double(cplx)>& f,
                                     int kmax) {
  auto bf = [&](double t) { return f(d.boundary_point(t)); };
  FourierData wide = FourierData::from_samples(bf, 2 * kmax, 2);
  FourierData data;
  data.kmax = kmax;
  data.coeffs.assign(2 * kmax + 1, 0.0);
  double tail = 0.0;
  for (int k = -2 * kmax; k <= 2 * kmax; ++k) {
    if (std::abs(k) <= kmax) data.coeffs[k + kmax] = wide.at(k);
    else tail += std::norm(wide.at(k));
  }
  HarmonicExtension e = harmonic_extension(d, data);
  e.tail_energy = tail;
  if (tail > 1e-8) {
    e.truncation_warning = true;
    std::fprintf(stderr, "warning: harmonic extension truncated at %d modes (tail energy %.3g)\n",
                 kmax, tail);
  }
  return e;
}

double HarmonicExtension::value(cplx z) const { return (g_plus(z) + g_minus(z)).real(); }

cplx HarmonicExtension::g_plus(cplx z) const {
  const cplx iw = 1.0 / droplet.phi(z);
  cplx s = data.at(0), p = 1.0;
  for (int k = 1; k <= data.kmax; ++k) {
    p *= iw;
    s += data.at(-k) * p;
  }
  return s;
}

cplx HarmonicExtension::g_minus(cplx z) const {
  const cplx iw = std::conj(1.0 / droplet.phi(z));
  cplx s = 0.0, p = 1.0;
  for (int k = 1; k <= data.kmax; ++k) {
    p *= iw;
    s += data.at(k) * p;
  }
  return s;
}

double HarmonicExtension::exterior_normal_derivative(double theta) const {
  cplx s = 0.0;
  for (int k = -data.kmax; k <= data.kmax; ++k)
    s -= double(std::abs(k)) * data.at(k) * std::polar(1.0, k * theta);
  return s.real() / std::abs(droplet.dpsi(std::polar(1.0, theta)));
}

double HarmonicExtension::exterior_dirichlet_energy() const { return kTwoPi * h_half_norm(data); }

double neumann_jump(const Droplet& d, const std::function<double(cplx)>& g, double theta) {
  const cplx w = std::polar(1.0, theta);
  const cplx b = d.psi(w);
  const cplx dp = d.dpsi(w);
  const cplx nrm = w * dp / std::abs(dp);
  const double h = 1e-6 * d.diameter();
  const double gb = g(b);
  const double d1 = (gb - g(b - h * nrm)) / h;
  const double d2 = (gb - g(b - 0.5 * h * nrm)) / (0.5 * h);
  const double inside = 2 * d2 - d1;
  const HarmonicExtension ext = harmonic_extension(d, g, 64);
  return inside - ext.exterior_normal_derivative(theta);
}

double neumann_jump_radial(double interior_slope) { return interior_slope; }

// --------------------------------------------------------------- mollifier

double bump(double x2) { return x2 < 1.0 ? std::exp(-1.0 / (1.0 - x2)) : 0.0; }

namespace {
double bump_mass_radial() {
  static const double m = integrate([](double s) { return bump(s * s) * s; }, 0.0, 1.0, 1e-14);
  return m;
}

// Profile g(x) = E log|x - U| for U from the bump, 0 <= x <= 1.  Circle
// averages of log|z - u| over |u| = s equal log max(|z|, s).
double unit_profile_exact(double x) {
  double num = 0.0;
  if (x > 0) num += std::log(x) * integrate([](double s) { return bump(s * s) * s; }, 0.0, x, 1e-12, 1e-13);
  num += integrate([](double s) { return s > 0 ? bump(s * s) * s * std::log(s) : 0.0; }, x, 1.0,
                   1e-12, 1e-13);
  return num / bump_mass_radial();
}

double unit_profile(double x) {
  // g is smooth on [0, 1] and matches log x to all orders at x = 1, so a
  // quintic spline on a fine grid is accurate to about 1e-13.
  constexpr int kNodes = 2049;
  static const auto spline = [] {
    std::vector<double> y(kNodes);
    for (int i = 0; i < kNodes; ++i) y[i] = unit_profile_exact(double(i) / (kNodes - 1));
    const double g2 = bump(0.0) / (2 * bump_mass_radial());
    return boost::math::interpolators::cardinal_quintic_b_spline<double>(
        y.data(), y.size(), 0.0, 1.0 / (kNodes - 1), {0.0, g2}, {1.0, -1.0});
  }();
  return spline(x);
}
}  // namespace

double mollified_log(const MollifierParams& p, cplx z) {
  const double eps = p.epsilon;
  if (!(eps > 0)) throw DomainError("mollifier scale must be positive");
  const double rho = std::abs(z);
  if (rho >= eps) return std::log(rho);
  return std::log(eps) + unit_profile(rho / eps);
}

double mollified_log_quadrature2d(const MollifierParams& p, cplx z) {
  const double eps = p.epsilon;
  if (!(eps > 0)) throw DomainError("mollifier scale must be positive");
  const cplx c = z / eps;
  // Polar coordinates centered at c so the log singularity sits at s = 0.
  auto ring = [&](double s) {
    if (s == 0) return 0.0;
    auto ang = [&](double t) { return bump(std::norm(c + std::polar(s, t))); };
    return s * std::log(s) * integrate(ang, 0.0, kTwoPi, 1e-12, 1e-16, 12);
  };
  const double num = integrate(ring, 0.0, std::abs(c) + 1.0, 1e-12, 1e-15, 18);
  return std::log(eps) + num / (kTwoPi * bump_mass_radial());
}

double mollifier_constant() { return mollified_log({1.0}, 0.0); }

double h_half_norm(const FourierData& f) {
  double s = 0.0;
  for (int k = -f.kmax; k <= f.kmax; ++k) s += std::abs(k) * std::norm(f.at(k));
  return s;
}

}  // namespace fhlab
