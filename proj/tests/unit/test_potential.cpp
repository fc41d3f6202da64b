#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fhlab/errors.hpp"
#include "fhlab/io.hpp"
#include "fhlab/potential.hpp"
#include "fhlab/quadrature.hpp"
#include "fhlab/stats.hpp"

using namespace fhlab;
using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

TEST_CASE("droplet radius for radial potentials") {
  CHECK(equilibrium_droplet(PotentialSpec::ginibre()).first.radius == doctest::Approx(1.0).epsilon(1e-12));
  const auto quartic = equilibrium_droplet(PotentialSpec::radial_even({0, 0, 1}));
  CHECK(quartic.first.radius == doctest::Approx(std::pow(2.0, -0.25)).epsilon(1e-11));
  for (double t : {0.5, 2.0, 7.0})
    CHECK(equilibrium_droplet(PotentialSpec::radial_even({0, t})).first.radius ==
          doctest::Approx(1 / std::sqrt(t)).epsilon(1e-11));
  // v = r^2 + r^4: r^2 + 2 r^4 = 1 at the edge.
  CHECK(equilibrium_droplet(PotentialSpec::radial_even({0, 1, 1})).first.radius ==
        doctest::Approx(std::sqrt(0.5)).epsilon(1e-11));
}

TEST_CASE("equilibrium density has unit mass") {
  for (auto v : {PotentialSpec::ginibre(), PotentialSpec::radial_even({0, 0, 1}),
                 PotentialSpec::radial_even({0, 1, 0.3, 0.2})}) {
    const auto [d, mu] = equilibrium_droplet(v);
    const double m = integrate([&](double r) { return 2 * kPi * r * mu.density(r); }, 0.0, d.radius, 1e-13);
    CHECK(m == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(mu.density(0.9 * d.radius) >= 0);
    CHECK(mu.density(1.1 * d.radius) == 0.0);
  }
}

TEST_CASE("potentials that cannot confine are rejected") {
  CHECK_THROWS_AS(PotentialSpec::radial_even({0, 0, -1}).validate(), DomainError);
  CHECK_THROWS(equilibrium_droplet(PotentialSpec::radial_even({0, -1, 0})));
}

TEST_CASE("logarithmic potential of the equilibrium measure") {
  const auto gin = equilibrium_droplet(PotentialSpec::ginibre()).second;
  CHECK(eq_log_potential(gin, 0.5) == doctest::Approx(-0.375).epsilon(1e-10));
  CHECK(eq_log_potential(gin, cplx(0, 2)) == doctest::Approx(std::log(2.0)).epsilon(1e-10));
  for (double r : {0.0, 0.2, 0.77, 0.99})
    CHECK(eq_log_potential(gin, std::polar(r, 1.0)) == doctest::Approx((r * r - 1) / 2).epsilon(1e-10));
  const auto quartic = equilibrium_droplet(PotentialSpec::radial_even({0, 0, 1})).second;
  // int_0^R log r * 8 r^3 dr with 2 R^4 = 1.
  CHECK(eq_log_potential(quartic, 0.0) == doctest::Approx(-(1 + std::log(2.0)) / 4).epsilon(1e-10));
}

TEST_CASE("capacity by map and by energy") {
  CHECK(capacity(Droplet::disk(1.0)) == 0.0);
  CHECK(capacity(Droplet::disk(3.0)) == doctest::Approx(std::log(3.0)));
  CHECK(std::abs(capacity_energy(Droplet::disk(3.0)) - std::log(3.0)) < 1e-3);
  CHECK(std::abs(capacity_energy(Droplet::disk(1.0))) < 1e-3);
  const Droplet e = Droplet::ellipse(2, 1);
  CHECK(capacity(e) == doctest::Approx(std::log(1.5)).epsilon(1e-14));
  CHECK(std::abs(capacity_energy(e) - std::log(1.5)) < 1e-3);
  CHECK(e.laurent[0] == cplx(1.5, 0));
  CHECK(std::abs(e.boundary_point(0.0) - cplx(2, 0)) < 1e-14);
  CHECK(std::abs(e.boundary_point(kPi / 2) - cplx(0, 1)) < 1e-14);
}

TEST_CASE("harmonic measure density") {
  const Droplet disk = Droplet::disk(1.0);
  for (double t : {0.0, 1.0, 4.0}) CHECK(harmonic_measure_density(disk, t) == doctest::Approx(1 / (2 * kPi)));
  const Droplet e = Droplet::ellipse(2, 1);
  CHECK(harmonic_measure_density(e, 0.0) == doctest::Approx(1 / (2 * kPi)));
  CHECK(harmonic_measure_arclength(e, 0.0) == doctest::Approx(1 / (2 * kPi)).epsilon(1e-12));
  // Arclength density integrates to one along the boundary.
  const double mass = integrate([&](double t) {
    return harmonic_measure_arclength(e, t) * std::abs(e.dpsi(std::polar(1.0, t)));
  }, 0.0, 2 * kPi, 1e-12);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("Poisson-Jensen on disks") {
  for (double r : {1.0, 3.0}) {
    const Droplet d = Droplet::disk(r);
    for (cplx z : {cplx(0, 0), cplx(0.3, -0.2) * r, cplx(-0.9, 0.1) * r}) {
      const double v = integrate([&](double t) {
        return std::log(std::abs(z - d.boundary_point(t))) * harmonic_measure_density(d, t);
      }, 0.0, 2 * kPi, 1e-13, 0.0, 25);
      CHECK(std::abs(v - capacity(d)) <= 1e-8);
    }
  }
}

TEST_CASE("Brownian hitting distribution") {
  const Droplet disk = Droplet::disk(1.0);
  const HittingHistogram h = brownian_hitting_estimate(disk, 20000, 6.5, 0.01, 7);
  long total = 0;
  for (long c : h.counts) total += c;
  CHECK(total == 20000);
  CHECK(ks_one_sample(h.hits, [](double t) { return t / (2 * kPi); }) <= 0.02);

  const Droplet e = Droplet::ellipse(2, 1);
  const HittingHistogram he = brownian_hitting_estimate(e, 10000, 13.0, 0.02, 11, 2);
  CHECK(ks_one_sample(he.hits, [](double t) { return t / (2 * kPi); }) <= 0.03);

  // Result depends only on (seed, walkers, workers).
  const auto a = brownian_hitting_estimate(disk, 500, 6.5, 0.01, 3, 2);
  const auto b = brownian_hitting_estimate(disk, 500, 6.5, 0.01, 3, 2);
  CHECK(a.hits == b.hits);

  CHECK_THROWS_AS(brownian_hitting_estimate(disk, 10, 5.0, 0.01, 1), DomainError);
  CHECK_THROWS_AS(brownian_hitting_estimate(disk, 10, 6.5, 0.05, 1), DomainError);
}

TEST_CASE("harmonic extension to the exterior") {
  const Droplet disk = Droplet::disk(1.0);
  const auto c = harmonic_extension(disk, [](cplx) { return 2.5; });
  CHECK(c.value(cplx(3, 1)) == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(c.value_at_infinity() == doctest::Approx(2.5).epsilon(1e-12));

  for (int k : {1, 2, 5}) {
    const auto ext = harmonic_extension(disk, [k](cplx z) { return std::cos(k * std::arg(z)); });
    for (cplx z : {cplx(1.5, 0.4), cplx(-2, 3), cplx(0.1, -1.2)})
      CHECK(ext.value(z) == doctest::Approx(std::pow(z, -k).real()).epsilon(1e-10).scale(1.0));
    CHECK(!ext.truncation_warning);
  }

  const auto zero = harmonic_extension(disk, [](cplx z) { return std::log(std::abs(z)); });
  CHECK(std::abs(zero.value(cplx(1.7, -0.3))) < 1e-12);

  // Ellipse, boundary data Re z = 2 cos t in the map parameter.
  const Droplet e = Droplet::ellipse(2, 1);
  const auto re = harmonic_extension(e, [](cplx z) { return z.real(); });
  const double w = (3 + std::sqrt(6.0)) / 3;
  CHECK(re.value(cplx(3, 0)) == doctest::Approx(2 / w).epsilon(1e-9));

  // Mean value on a circle in the complement.
  const auto bump = harmonic_extension(e, [](cplx z) { return std::exp(z.real()) * std::cos(z.imag()); });
  const cplx c0(2.5, 1.5);
  const double avg = integrate([&](double t) { return bump.value(c0 + std::polar(0.6, t)); }, 0.0, 2 * kPi, 1e-12) / (2 * kPi);
  CHECK(std::abs(avg - bump.value(c0)) <= 1e-6);

  // Decay towards the value at infinity.
  const double d1 = std::abs(bump.value(10.0) - bump.value_at_infinity());
  const double d2 = std::abs(bump.value(100.0) - bump.value_at_infinity());
  CHECK(d2 < 0.2 * d1);
}

TEST_CASE("Neumann jump") {
  const Droplet disk = Droplet::disk(1.0);
  for (double t : {0.0, 1.3, 4.0}) {
    CHECK(neumann_jump(disk, [](cplx z) { return std::log(std::abs(z)); }, t) == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(neumann_jump(disk, [](cplx z) { return std::norm(z); }, t) == doctest::Approx(2.0).epsilon(1e-5));
    // Harmonic near the circle and bounded outside, so it is its own extension.
    CHECK(std::abs(neumann_jump(disk, [](cplx z) { return 0.7 * (1.0 / z).real() + 1; }, t)) < 1e-5);
    const double a = neumann_jump(disk, [](cplx z) { return std::log(std::abs(z - cplx(0.3, 0.1))); }, t);
    const double b = neumann_jump(disk, [](cplx z) { return std::log(std::abs(z - cplx(-0.5, 0.2))); }, t);
    CHECK(std::abs(a - b) <= 1e-6);
  }
  CHECK(neumann_jump_radial(2.0) == 2.0);
}

TEST_CASE("mollified logarithm") {
  const MollifierParams p{0.1};
  CHECK(mollified_log(p, 0.2) == std::log(0.2));
  CHECK(mollified_log(p, cplx(0, 0.1)) == std::log(0.1));
  // c_chi from mpmath.
  const double c_chi = -0.86839994359504240069;
  CHECK(mollifier_constant() == doctest::Approx(c_chi).epsilon(1e-12));
  CHECK(mollified_log(p, 0.0) == doctest::Approx(std::log(0.1) + c_chi).epsilon(1e-12));
  for (double x : {0.0, 0.013, 0.05, 0.0777, 0.099}) {
    const cplx z = std::polar(x, 0.4);
    CHECK(mollified_log(p, z) == doctest::Approx(mollified_log_quadrature2d(p, z)).epsilon(1e-10));
    if (x > 0) {
      CHECK(mollified_log(p, z) >= std::log(x));
      CHECK(mollified_log(p, z) - std::log(x) <= std::abs(std::log(0.1)) + std::abs(c_chi));
    }
  }
  // Decreases to log|z| as epsilon shrinks.
  const cplx z(0.03, 0.01);
  double prev = mollified_log({0.2}, z);
  for (double eps : {0.1, 0.05, 0.035}) {
    const double cur = mollified_log({eps}, z);
    CHECK(cur < prev);
    prev = cur;
  }
  CHECK(mollified_log({0.03}, z) == std::log(std::abs(z)));
  CHECK_THROWS_AS(mollified_log({0.0}, z), DomainError);
}

TEST_CASE("H^{1/2} norm of boundary data") {
  CHECK(h_half_norm(FourierData::from_samples([](double) { return 3.0; }, 16)) == doctest::Approx(0.0).scale(1.0));
  CHECK(h_half_norm(FourierData::from_samples([](double t) { return std::cos(t); }, 16)) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(h_half_norm(FourierData::from_samples([](double t) { return std::cos(2 * t); }, 16)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("droplet JSON carries shape, coefficients and capacity") {
  const json d = to_json(Droplet::disk(2.0));
  CHECK(d["shape"] == "disk");
  CHECK(d["capacity_log"].get<double>() == doctest::Approx(std::log(2.0)));
  const json e = to_json(Droplet::ellipse(2, 1));
  CHECK(e["shape"] == "exterior_map");
  CHECK(e["coefficients"].size() == 3);
}
