#include <doctest.h>

#include <cmath>

#include "fhlab/errors.hpp"
#include "fhlab/specfun.hpp"

using namespace fhlab;

// Reference values from mpmath at 30 digits.
TEST_CASE("log_gamma matches high precision values") {
  CHECK(log_gamma(0.5) == doctest::Approx(0.57236494292470008707).epsilon(1e-14));
  CHECK(log_gamma(3.7) == doctest::Approx(1.4280723266653879219).epsilon(1e-14));
  CHECK(log_gamma(25.3) == doctest::Approx(55.746181183584590052).epsilon(1e-14));
  CHECK(log_gamma(100.5) == doctest::Approx(361.43554046777762156).epsilon(1e-14));
  CHECK(log_gamma(1.0) == 0.0);
  CHECK_THROWS_AS(log_gamma(0.0), DomainError);
  CHECK_THROWS_AS(log_gamma(-2.5), DomainError);
}

TEST_CASE("trigamma") {
  CHECK(trigamma(0.5) == doctest::Approx(4.9348022005446793094).epsilon(1e-13));
  CHECK(trigamma(1.0) == doctest::Approx(1.6449340668482264365).epsilon(1e-13));
  CHECK(trigamma(7.3) == doctest::Approx(0.14679576813142709816).epsilon(1e-13));
}

TEST_CASE("log_barnes_g at integers and half integers") {
  CHECK(std::abs(log_barnes_g(1.0)) < 1e-13);
  CHECK(std::abs(log_barnes_g(2.0)) < 1e-13);
  CHECK(std::abs(log_barnes_g(3.0)) < 1e-13);
  CHECK(log_barnes_g(4.0) == doctest::Approx(0.69314718055994530942).epsilon(1e-13));
  CHECK(log_barnes_g(1.5) == doctest::Approx(0.066931888435004704274).epsilon(1e-12));
  CHECK(log_barnes_g(2.5) == doctest::Approx(-0.053850349200240518071).epsilon(1e-12));
  CHECK(log_barnes_g(10.3) == doctest::Approx(39.764297373077977652).epsilon(1e-13));
  CHECK(log_barnes_g(50.7) == doctest::Approx(3016.70468446247401).epsilon(1e-13));
  CHECK(log_barnes_g(150.2) == doctest::Approx(39151.496757452355567).epsilon(1e-13));
  CHECK_THROWS_AS(log_barnes_g(0.5), DomainError);
}

TEST_CASE("log_barnes_g satisfies G(x+1) = Gamma(x) G(x)") {
  for (double x : {1.0, 1.25, 2.7, 9.9, 19.5, 20.5, 33.3})
    CHECK(log_barnes_g(x + 1) - log_barnes_g(x) == doctest::Approx(log_gamma(x)).epsilon(1e-12));
}

TEST_CASE("barnes constant is zeta'(-1)") {
  CHECK(barnes_g_constant() == doctest::Approx(-0.16542114370045092921).epsilon(1e-13));
}

TEST_CASE("origin moment: sum and Barnes forms agree") {
  for (int n : {1, 5, 64, 1000})
    for (double g : {0.0, 0.5, 1.0, 2.0, 3.3}) {
      const double a = origin_moment_exact(n, g).log_magnitude;
      const double b = origin_moment_barnes(n, g).log_magnitude;
      CHECK(a == doctest::Approx(b).epsilon(1e-10).scale(1.0));
    }
}

TEST_CASE("origin moment for n = 1 is the Gamma moment of a CN(0,1) modulus") {
  // |z|^2 ~ Exp(1), so E|z|^g = Gamma(1 + g/2).
  for (double g : {0.5, 1.0, 2.0}) CHECK(origin_moment_exact(1, g).log_magnitude == doctest::Approx(std::lgamma(1 + g / 2)));
  CHECK(origin_moment_exact(10, 0.0).log_magnitude == 0.0);
}

TEST_CASE("gamma = 2 moment equals n! / n^n") {
  // E prod |z_k|^2 = E|det M|^2 = n! n^{-n} for CN(0, 1/n) entries.
  for (int n : {1, 3, 12, 40})
    CHECK(origin_moment_exact(n, 2.0).log_magnitude == doctest::Approx(std::lgamma(n + 1.0) - n * std::log(double(n))).epsilon(1e-12));
}

TEST_CASE("asymptotic origin moment approaches the exact one") {
  for (double g : {0.5, 1.0, 2.0}) {
    const double e1 = std::abs(origin_moment_exact(250, g).log_magnitude - origin_moment_asymptotic(250, g).log_magnitude);
    const double e2 = std::abs(origin_moment_exact(1000, g).log_magnitude - origin_moment_asymptotic(1000, g).log_magnitude);
    CHECK(e2 < 5.0 / 1000);
    CHECK(e2 < e1);
  }
}

TEST_CASE("origin moments reject bad input") {
  CHECK_THROWS_AS(origin_moment_exact(0, 1.0), DomainError);
  CHECK_THROWS_AS(origin_moment_exact(10, -2.5), DomainError);
}

TEST_CASE("factorial and superfactorial values") {
  CHECK(log_gamma(10.0) == doctest::Approx(std::log(362880.0)).epsilon(1e-14));
  double s = 0;
  for (int k = 1; k <= 9; ++k) s += std::lgamma(k + 1.0);
  CHECK(log_barnes_g(11.0) == doctest::Approx(s).epsilon(1e-13));
}

TEST_CASE("functional equation on the half-integer ladder") {
  for (double x = 1.0; x <= 20.0; x += 0.5)
    CHECK(std::abs(log_barnes_g(x + 1) - log_gamma(x) - log_barnes_g(x)) <= 1e-10);
}

TEST_CASE("small exact origin moments") {
  CHECK(std::abs(origin_moment_exact(1, 2.0).log_magnitude) < 1e-15);
  CHECK(origin_moment_exact(2, 2.0).log_magnitude == doctest::Approx(std::log(0.5)).epsilon(1e-14));
  CHECK(origin_moment_asymptotic(37, 0.0).log_magnitude == 0.0);
  CHECK(origin_moment_asymptotic(100, 2.0).log_magnitude ==
        doctest::Approx(-100 + 0.5 * std::log(100.0) + 0.5 * std::log(2 * M_PI)).epsilon(1e-14));
}

TEST_CASE("exact and asymptotic within 5/n for n >= 100") {
  for (double g : {0.5, 1.0, 2.0})
    for (int n : {100, 150, 300, 700, 1000, 4000}) {
      const double r = std::expm1(origin_moment_exact(n, g).log_magnitude - origin_moment_asymptotic(n, g).log_magnitude);
      CHECK(std::abs(r) <= 5.0 / n);
    }
}

TEST_CASE("shifted exact moment increases with n") {
  for (double g : {0.5, 1.0, 2.0}) {
    double prev = origin_moment_exact(1, g).log_magnitude + 0.0;
    for (int n = 2; n <= 200; ++n) {
      const double cur = origin_moment_exact(n, g).log_magnitude + n * g / 2 * std::log(double(n));
      CHECK(cur > prev);
      prev = cur;
    }
  }
}
