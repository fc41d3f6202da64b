#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fhlab/errors.hpp"
#include "fhlab/moments.hpp"
#include "fhlab/rng.hpp"
#include "fhlab/sampler.hpp"
#include "fhlab/stats.hpp"

using namespace fhlab;
using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

namespace {

MomentQuery query(int n, std::vector<Singularity> s, TestFn f = TestFn::zero()) {
  MomentQuery q;
  q.n = n;
  q.singularities = std::move(s);
  q.test_fn = f;
  return q;
}

std::vector<Spectrum> dense(int n, int count, std::uint64_t seed) {
  BatchRequest r;
  r.n = n;
  r.count = count;
  r.seed = seed;
  return sample_batch(r, 4);
}

}  // namespace

TEST_CASE("origin singularity reduces to the asymptotic moment") {
  for (int n : {16, 100, 1000})
    for (double g : {0.5, 1.0, 2.0, 3.7}) {
      const double a = fh_rhs_ginibre(query(n, {{0.0, g}})).log_magnitude;
      CHECK(a == doctest::Approx(origin_moment_asymptotic(n, g).log_magnitude).epsilon(1e-12));
    }
}

TEST_CASE("linear statistic of Re z is exactly Gaussian") {
  // Re Tr M is N(0, 1/2) for Ginibre, so ln E exp(t Re Tr M) = t^2/4.
  for (double t : {0.3, 1.0, 2.5}) {
    const double a = fh_rhs_ginibre(query(50, {}, TestFn::harmonic_re(1, t))).log_magnitude;
    CHECK(a == doctest::Approx(t * t / 4).epsilon(1e-12));
  }
  CHECK(linear_stat_variance_prediction(TestFn::harmonic_re(1, 1.0)) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(linear_stat_variance_prediction(TestFn::harmonic_re(3, 1.0)) == doctest::Approx(1.5).epsilon(1e-14));
  // Constant offsets contribute n times the offset.
  TestFn c = TestFn::zero();
  c.offset = 0.25;
  CHECK(fh_rhs_ginibre(query(40, {}, c)).log_magnitude == doctest::Approx(10.0).epsilon(1e-14));
}

TEST_CASE("general formula agrees with the Ginibre formula for V = |z|^2") {
  const PotentialSpec v = PotentialSpec::ginibre();
  const std::vector<MomentQuery> qs = {
      query(200, {{cplx(0.3, -0.2), 1.5}}),
      query(200, {{cplx(0.3, -0.2), 1.0}, {cplx(-0.4, 0.1), 2.0}}),
      query(200, {{cplx(0.1, 0.1), 1.0}}, TestFn::gaussian_bump(cplx(-0.2, 0.1), 0.2, 0.7)),
      query(200, {{cplx(0.0, 0.5), 0.5}}, TestFn::harmonic_re(2, 0.4)),
  };
  for (const auto& q : qs)
    CHECK(fh_rhs_general(v, q).log_magnitude ==
          doctest::Approx(fh_rhs_ginibre(q).log_magnitude).epsilon(1e-9));
}

TEST_CASE("general formula against exact radial origin moments") {
  // ln E prod |z_k| for V = |z|^2 + |z|^4, from the radial product
  // formula with the normalizations evaluated to 30 digits.
  const PotentialSpec v = PotentialSpec::radial_even({0, 1, 1});
  const std::vector<std::pair<int, double>> exact = {{32, -22.61023346185109},
                                                     {64, -45.62131006636417},
                                                     {128, -91.71939025253361},
                                                     {256, -183.9962718674404},
                                                     {512, -368.6335475145558}};
  double prev = 1e9;
  for (const auto& [n, e] : exact) {
    const double d = std::abs(fh_rhs_general(v, query(n, {{0.0, 1.0}})).log_magnitude - e);
    CHECK(d <= 1.0 / n);
    CHECK(d < prev);
    prev = d;
  }
}

TEST_CASE("Monte Carlo origin moment from Kostlan moduli") {
  BatchRequest r;
  r.method = SamplerMethod::KostlanModuli;
  r.n = 64;
  r.count = 20000;
  r.seed = 3;
  const auto batch = sample_batch(r, 4);
  const MCEstimate e = mc_moment(batch, query(64, {{0.0, 2.0}}), 4);
  const double exact = origin_moment_exact(64, 2.0).log_magnitude;
  CHECK(std::abs(e.log_mean - exact) <= 4 * e.rel_stderr);
  CHECK(e.ess > 100);
}

TEST_CASE("Monte Carlo off-origin moment approaches the asymptotic formula") {
  const int n = 128;
  const auto batch = dense(n, 1500, 5);
  const MomentQuery q = query(n, {{cplx(0.3, 0.2), 1.0}});
  const MCEstimate e = mc_moment(batch, q, 4);
  const double pred = fh_rhs_ginibre(q).log_magnitude;
  CHECK(std::abs(e.log_mean - pred) <= 4 * e.rel_stderr + 0.05);
}

TEST_CASE("log-mean-exp and its jackknife") {
  const MCEstimate c = log_mean_exp(std::vector<double>(20, -3.5));
  CHECK(c.log_mean == -3.5);
  CHECK(c.rel_stderr == 0.0);
  CHECK(c.ess == 20.0);

  std::vector<double> w;
  for (int i = 0; i < 40; ++i) w.push_back(0.01 * i + 700);
  const MCEstimate e = log_mean_exp(w);
  double s = 0;
  for (double x : w) s += std::exp(x - 700);
  CHECK(e.log_mean == doctest::Approx(700 + std::log(s / 40)).epsilon(1e-15));
  // Jackknife by brute force.
  std::vector<double> loo;
  for (int i = 0; i < 40; ++i) loo.push_back(std::log((s - std::exp(w[i] - 700)) / 39));
  const double m = mean(loo);
  double v = 0;
  for (double x : loo) v += (x - m) * (x - m);
  CHECK(e.rel_stderr == doctest::Approx(std::sqrt(v * 39 / 40)).epsilon(1e-10));

  std::vector<double> spiky(50, 0.0);
  spiky[7] = 40;
  CHECK_THROWS_AS(log_mean_exp(spiky), DegenerateEstimate);
  CHECK_THROWS_AS(log_mean_exp({}), DomainError);
}

TEST_CASE("query validation") {
  CHECK_THROWS_AS(fh_rhs_ginibre(query(100, {{cplx(0.95, 0), 1.0}})), HypothesisViolation);
  CHECK_THROWS_AS(fh_rhs_ginibre(query(100, {{0.1, 1.0}, {0.15, 1.0}})), HypothesisViolation);
  CHECK_THROWS_AS(fh_rhs_ginibre(query(100, {}, TestFn::gaussian_bump(0.0, 0.05, 1.0))), HypothesisViolation);
  CHECK_NOTHROW(fh_rhs_ginibre(query(100, {}, TestFn::gaussian_bump(0.0, 0.3, 1.0))));
  CHECK_THROWS_AS(fh_rhs_ginibre(query(1, {{0.0, 1.0}})), DomainError);
  CHECK_THROWS_AS(fh_rhs_ginibre(query(100, {{0.0, -1.0}})), DomainError);
  MomentQuery k = query(100, {{0.0, 1.0}});
  k.kappa = 0.6;
  CHECK_THROWS_AS(fh_rhs_ginibre(k), DomainError);
  CHECK_THROWS_AS(fh_rhs_ginibre(query(100, {}, TestFn::monomial(1, 1.0))), DomainError);
}

TEST_CASE("moduli-only spectra accept only radial queries") {
  const Spectrum s = sample_kostlan_moduli(10, 1);
  CHECK_NOTHROW(moment_log_weight(s, query(10, {{0.0, 1.0}})));
  CHECK_THROWS_AS(moment_log_weight(s, query(10, {{0.2, 1.0}})), DomainError);
  CHECK_THROWS_AS(moment_log_weight(s, query(10, {}, TestFn::harmonic_re(1, 1.0))), DomainError);
  double direct = 0;
  for (const auto& p : s.points) direct += 2 * std::log(std::abs(p));
  CHECK(moment_log_weight(s, query(10, {{0.0, 2.0}})) == doctest::Approx(direct).epsilon(1e-13));
}

TEST_CASE("disk integrals of a Gaussian bump") {
  const TestFn f = TestFn::gaussian_bump(cplx(0.2, -0.1), 0.08, 1.3);
  const EquilibriumMeasure mu{Droplet::disk(1.0), PotentialSpec::ginibre()};
  const DiskIntegrals di = disk_integrals(f, mu);
  CHECK(di.mass == doctest::Approx(2 * 1.3 * 0.08 * 0.08).epsilon(1e-9));
  CHECK(di.dirichlet == doctest::Approx(kPi * 1.3 * 1.3).epsilon(1e-9));
  CHECK(std::abs(di.laplace) < 1e-9);
  CHECK(std::abs(di.boundary_mean) < 1e-15);
}

TEST_CASE("Ward statistic for h = z has mean zero") {
  // W = n(n-1)/2 + n - n sum |z|^2 and E sum |z|^2 = (n+1)/2 exactly.
  const int n = 64;
  const auto batch = dense(n, 400, 9);
  std::vector<double> re, im;
  for (const auto& s : batch) {
    const cplx w = ward_statistic(s, TestFn::monomial(1, 1.0), PotentialSpec::ginibre());
    double sq = 0;
    for (const auto& p : s.points) sq += std::norm(p);
    CHECK(w.real() == doctest::Approx(n * (n - 1) / 2.0 + n - n * sq).epsilon(1e-10));
    re.push_back(w.real());
    im.push_back(w.imag());
  }
  CHECK(std::abs(mean(re)) <= 4 * std_error(re));
  CHECK(std::abs(mean(im)) <= 1e-8);
}

TEST_CASE("isotropy statistic rotates with weight exp(-2 i theta)") {
  const Spectrum s = sample_ginibre_spectrum(60, 11);
  Spectrum t = s;
  const cplx rot = std::polar(1.0, 0.7);
  for (auto& p : t.points) p *= rot;
  const TestFn g = TestFn::gaussian_bump(0.0, 0.4, 1.0);
  const cplx a = isotropy_statistic(s, g, 0.2);
  const cplx b = isotropy_statistic(t, g, 0.2);
  CHECK(std::abs(b - a * std::polar(1.0, -1.4)) < 1e-10 * (1 + std::abs(a)));
  CHECK_THROWS_AS(isotropy_statistic(s, g, 0.0), DomainError);
}

TEST_CASE("variance of a smooth linear statistic") {
  const int n = 128;
  const auto batch = dense(n, 800, 13);
  const TestFn f = TestFn::harmonic_re(2, 1.0);
  std::vector<double> x;
  for (const auto& s : batch) {
    double t = 0;
    for (const auto& p : s.points) t += f.value(p);
    x.push_back(t);
  }
  CHECK(std::abs(variance(x) - linear_stat_variance_prediction(f)) <= 4 * variance_std_error(x));
}
