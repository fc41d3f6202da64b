#include "fhlab/sampler.hpp"

#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "fhlab/errors.hpp"
#include "fhlab/parallel.hpp"
#include "fhlab/rng.hpp"

namespace fhlab {

using cplx = std::complex<double>;

std::string method_name(SamplerMethod m) {
  switch (m) {
    case SamplerMethod::GinibreDense: return "dense";
    case SamplerMethod::KostlanModuli: return "kostlan";
    case SamplerMethod::RadialDPP: return "radial_dpp";
    case SamplerMethod::MALA: return "mala";
    case SamplerMethod::GinibreHessenberg: return "hessenberg";
  }
  return "unknown";
}

SamplerMethod method_from_name(const std::string& s) {
  if (s == "dense") return SamplerMethod::GinibreDense;
  if (s == "kostlan") return SamplerMethod::KostlanModuli;
  if (s == "radial_dpp") return SamplerMethod::RadialDPP;
  if (s == "mala") return SamplerMethod::MALA;
  if (s == "hessenberg") return SamplerMethod::GinibreHessenberg;
  throw DomainError("unknown sampler method: " + s);
}

namespace {

Spectrum make_spectrum(int n, std::uint64_t seed, SamplerMethod m, PotentialSpec v) {
  Spectrum s;
  s.n = n;
  s.seed = seed;
  s.method = m;
  s.potential = std::move(v);
  return s;
}

void check_finite(const Spectrum& s) {
  for (const cplx& z : s.points)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw ConvergenceError("eigensolver returned a non-finite eigenvalue");
}

}  // namespace

Spectrum sample_ginibre_spectrum(int n, std::uint64_t seed) {
  if (n < 1) throw DomainError("n must be >= 1");
  Rng rng = make_stream(seed, 0);
  std::normal_distribution<double> g(0.0, std::sqrt(0.5 / n));
  std::vector<lapack_complex_double> a(static_cast<std::size_t>(n) * n);
  for (auto& x : a) {
    const double re = g(rng);
    const double im = g(rng);
    x = cplx(re, im);
  }
  std::vector<lapack_complex_double> w(n);
  const lapack_int info =
      LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, a.data(), n, w.data(), nullptr, 1, nullptr, 1);
  if (info != 0) throw ConvergenceError("zgeev failed to converge (info=" + std::to_string(info) + ")");
  Spectrum s = make_spectrum(n, seed, SamplerMethod::GinibreDense, PotentialSpec::ginibre());
  s.points.resize(n);
  for (int i = 0; i < n; ++i) s.points[i] = w[i];
  check_finite(s);
  return s;
}

Spectrum sample_ginibre_hessenberg(int n, std::uint64_t seed) {
  if (n < 1) throw DomainError("n must be >= 1");
  Rng rng = make_stream(seed, 0);
  std::normal_distribution<double> g(0.0, std::sqrt(0.5 / n));
  std::vector<lapack_complex_double> h(static_cast<std::size_t>(n) * n,
                                       cplx(0.0, 0.0));
  for (int col = 0; col < n; ++col) {
    for (int row = 0; row <= col; ++row) {
      const double re = g(rng);
      const double im = g(rng);
      h[static_cast<std::size_t>(col) * n + row] = cplx(re, im);
    }
    if (col + 1 < n) {
      std::gamma_distribution<double> gam(static_cast<double>(n - col - 1), 1.0);
      h[static_cast<std::size_t>(col) * n + col + 1] =
          cplx(std::sqrt(gam(rng) / n), 0.0);
    }
  }
  std::vector<lapack_complex_double> w(n);
  const lapack_int info = LAPACKE_zhseqr(LAPACK_COL_MAJOR, 'E', 'N', n, 1, n, h.data(), n,
                                         w.data(), nullptr, 1);
  if (info != 0) throw ConvergenceError("zhseqr failed to converge (info=" + std::to_string(info) + ")");
  Spectrum s = make_spectrum(n, seed, SamplerMethod::GinibreHessenberg, PotentialSpec::ginibre());
  s.points.resize(n);
  for (int i = 0; i < n; ++i) s.points[i] = w[i];
  check_finite(s);
  return s;
}

Spectrum sample_kostlan_moduli(int n, std::uint64_t seed) {
  if (n < 1) throw DomainError("n must be >= 1");
  Rng rng = make_stream(seed, 0);
  Spectrum s = make_spectrum(n, seed, SamplerMethod::KostlanModuli, PotentialSpec::ginibre());
  s.moduli_only = true;
  s.points.resize(n);
  for (int j = 1; j <= n; ++j) {
    std::gamma_distribution<double> gam(static_cast<double>(j), 1.0);
    s.points[j - 1] = std::sqrt(gam(rng) / n);
  }
  return s;
}

// ------------------------------------------------------------- radial DPP

namespace {

// Rejection sampler for r with density proportional to exp(phi_k(r)) on the
// kernel window, using a piecewise-constant envelope.
struct RadialProposal {
  static constexpr int kCells = 64;
  std::vector<double> lo, width, phi_max;
  std::vector<std::vector<double>> bound;  // envelope relative to exp(phi_max)
  std::vector<std::discrete_distribution<int>> pick;

  explicit RadialProposal(const PlanarKernel& K) {
    const int n = K.n;
    lo.resize(n);
    width.resize(n);
    phi_max.resize(n);
    bound.resize(n);
    pick.resize(n);
    for (int k = 0; k < n; ++k) {
      lo[k] = K.window_lo[k];
      width[k] = (K.window_hi[k] - K.window_lo[k]) / kCells;
      phi_max[k] = kernel_log_weight(K, k, K.peak[k]);
      bound[k].resize(kCells);
      for (int c = 0; c < kCells; ++c) {
        const double a = lo[k] + c * width[k];
        const double b = a + width[k];
        double m = std::max(kernel_log_weight(K, k, a), kernel_log_weight(K, k, b));
        if (K.peak[k] >= a && K.peak[k] <= b) m = phi_max[k];
        bound[k][c] = std::exp(m - phi_max[k]);
      }
      pick[k] = std::discrete_distribution<int>(bound[k].begin(), bound[k].end());
    }
  }

  double draw(const PlanarKernel& K, int k, Rng& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (;;) {
      const int c = pick[k](rng);
      const double r = lo[k] + (c + u(rng)) * width[k];
      const double acc = std::exp(kernel_log_weight(K, k, r) - phi_max[k]) / bound[k][c];
      if (u(rng) < acc) return r;
    }
  }
};

}  // namespace

Spectrum sample_radial_dpp(const PlanarKernel& K, std::uint64_t seed) {
  const int n = K.n;
  RadialProposal prop(K);
  Rng rng = make_stream(seed, 0);
  std::uniform_int_distribution<int> pick_k(0, n - 1);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::uniform_real_distribution<double> ang(0.0, 2 * std::numbers::pi);

  Spectrum s = make_spectrum(n, seed, SamplerMethod::RadialDPP, K.potential);
  s.points.reserve(n);
  std::vector<std::vector<cplx>> basis;
  basis.reserve(n);
  std::vector<cplx> psi(n), res(n);
  long tries_total = 0;
  for (int i = 0; i < n; ++i) {
    long tries = 0;
    for (;;) {
      if (++tries > 10000)
        throw RejectionEfficiencyError("radial DPP acceptance fell below 1e-4");
      const int k = pick_k(rng);
      const double r = prop.draw(K, k, rng);
      const double th = ang(rng);
      const double lr = std::log(r);
      const double base = -0.5 * n * K.potential.v(r);
      double norm2 = 0.0;
      for (int j = 0; j < n; ++j) {
        psi[j] = std::polar(std::exp(j * lr + base - 0.5 * K.log_norms[j]), j * th);
        norm2 += std::norm(psi[j]);
      }
      res = psi;
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& e : basis) {
          cplx dot = 0.0;
          for (int j = 0; j < n; ++j) dot += std::conj(e[j]) * res[j];
          for (int j = 0; j < n; ++j) res[j] -= dot * e[j];
        }
      }
      double rn2 = 0.0;
      for (int j = 0; j < n; ++j) rn2 += std::norm(res[j]);
      if (norm2 > 0 && u01(rng) * norm2 < rn2) {
        const double inv = 1.0 / std::sqrt(rn2);
        for (auto& x : res) x *= inv;
        basis.push_back(res);
        s.points.push_back(std::polar(r, th));
        break;
      }
    }
    tries_total += tries;
  }
  s.acceptance_rate = static_cast<double>(n) / tries_total;
  return s;
}

Spectrum sample_radial_dpp(const PotentialSpec& v, int n, std::uint64_t seed) {
  return sample_radial_dpp(build_kernel(v, n), seed);
}

// ------------------------------------------------------------------- MALA

namespace {

// sum_j log|y - z_j|^2 - log|x - z_j|^2 over j != i, via blocked products.
double pair_log_ratio(const std::vector<cplx>& z, int i, cplx x, cplx y) {
  double acc = 0.0;
  double prod = 1.0;
  int cnt = 0;
  const int n = static_cast<int>(z.size());
  for (int j = 0; j < n; ++j) {
    if (j == i) continue;
    prod *= std::norm(y - z[j]) / std::norm(x - z[j]);
    if (++cnt == 8) {
      acc += std::log(prod);
      prod = 1.0;
      cnt = 0;
    }
  }
  return acc + std::log(prod);
}

cplx drift(const std::vector<cplx>& z, int i, cplx x, const PotentialSpec& v, int n) {
  cplx g = 0.0;
  for (int j = 0; j < static_cast<int>(z.size()); ++j) {
    if (j == i) continue;
    const cplx d = x - z[j];
    g += d * (2.0 / std::norm(d));
  }
  return g - double(n) * v.gradient(x);
}

}  // namespace

Spectrum sample_coulomb_mala(const PotentialSpec& v, int n, long steps, double step_size,
                             std::uint64_t seed, const MalaOptions& opt) {
  if (n < 1) throw DomainError("n must be >= 1");
  if (!(step_size > 0)) throw DomainError("MALA step size must be positive");
  if (steps < opt.burn_in) throw DomainError("MALA steps must be at least the burn-in length");
  Rng rng = make_stream(seed, 0);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u01(0.0, 1.0);

  double r0 = 1.0;
  if (v.radial()) r0 = equilibrium_droplet(v).first.radius;
  std::vector<cplx> z(n);
  for (auto& p : z) p = std::polar(r0 * std::sqrt(u01(rng)), 2 * std::numbers::pi * u01(rng));

  double eps = step_size;
  long acc_after = 0, prop_after = 0;
  for (long sweep = 0; sweep < steps; ++sweep) {
    long acc = 0;
    for (int i = 0; i < n; ++i) {
      const cplx x = z[i];
      const cplx gx = drift(z, i, x, v, n);
      const double h = eps * eps;
      const cplx y = x + 0.5 * h * gx + eps * cplx(g(rng), g(rng));
      const cplx gy = drift(z, i, y, v, n);
      const double dlog = pair_log_ratio(z, i, x, y) - n * (v.V(y) - v.V(x));
      const double fwd = std::norm(y - x - 0.5 * h * gx);
      const double bwd = std::norm(x - y - 0.5 * h * gy);
      const double la = dlog + (fwd - bwd) / (2 * h);
      if (std::isnan(la) || la == std::numeric_limits<double>::infinity())
        throw DivergenceError("MALA energy became non-finite");
      if (la >= 0 || u01(rng) < std::exp(la)) {
        z[i] = y;
        ++acc;
      }
    }
    const double rate = static_cast<double>(acc) / n;
    if (sweep < opt.burn_in) {
      if (opt.adapt) eps *= std::exp((rate - opt.target_acceptance) / std::pow(sweep + 10.0, 0.6));
    } else {
      acc_after += acc;
      prop_after += n;
    }
  }
  for (const cplx& p : z)
    if (!std::isfinite(p.real()) || !std::isfinite(p.imag()))
      throw DivergenceError("MALA state became non-finite");
  Spectrum s = make_spectrum(n, seed, SamplerMethod::MALA, v);
  s.points = std::move(z);
  s.acceptance_rate = prop_after ? static_cast<double>(acc_after) / prop_after
                                 : std::numeric_limits<double>::quiet_NaN();
  return s;
}

std::vector<Spectrum> sample_batch(const BatchRequest& req, unsigned threads) {
  if (req.count < 0) throw DomainError("batch count must be nonnegative");
  std::vector<Spectrum> out(req.count);
  const bool dpp = req.method == SamplerMethod::RadialDPP;
  PlanarKernel K;
  if (dpp) K = build_kernel(req.potential, req.n);
  parallel_for(static_cast<std::size_t>(req.count), threads, [&](std::size_t i) {
    const std::uint64_t s = derive_seed(req.seed, i);
    switch (req.method) {
      case SamplerMethod::GinibreDense: out[i] = sample_ginibre_spectrum(req.n, s); break;
      case SamplerMethod::GinibreHessenberg: out[i] = sample_ginibre_hessenberg(req.n, s); break;
      case SamplerMethod::KostlanModuli: out[i] = sample_kostlan_moduli(req.n, s); break;
      case SamplerMethod::RadialDPP: out[i] = sample_radial_dpp(K, s); break;
      case SamplerMethod::MALA:
        out[i] = sample_coulomb_mala(req.potential, req.n, req.mala_steps, req.mala_step_size, s,
                                     req.mala);
        break;
    }
  });
  return out;
}

}  // namespace fhlab
