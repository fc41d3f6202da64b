#include "fhlab/specfun.hpp"

#include <boost/math/special_functions/trigamma.hpp>
#include <cmath>
#include <numbers>

#include "fhlab/errors.hpp"

namespace fhlab {

namespace {

constexpr double kShift = 12.0;
constexpr int kBootstrapOrder = 12;

// Asymptotic ln G(z+1) without its constant term.
double barnes_tail(double z) {
  static constexpr double bern[] = {-1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66,
                                    -691.0 / 2730, 7.0 / 6};
  const double lz = std::log(z);
  double s = z * z * (0.5 * lz - 0.75) + 0.5 * z * std::log(2 * std::numbers::pi) - lz / 12.0;
  const double iz2 = 1.0 / (z * z);
  double p = iz2;
  for (int k = 1; k <= 6; ++k) {
    s += bern[k - 1] / (4.0 * k * (k + 1)) * p;
    p *= iz2;
  }
  return s;
}

}  // namespace

double log_gamma(double x) {
  if (!(x > 0)) throw DomainError("log_gamma: argument must be positive");
  return std::lgamma(x);
}

double trigamma(double x) {
  if (!(x > 0)) throw DomainError("trigamma: argument must be positive");
  return boost::math::trigamma(x);
}

double barnes_g_constant() {
  static const double c = [] {
    double lg = 0.0;
    for (int j = 1; j <= kBootstrapOrder; ++j) lg += std::lgamma(static_cast<double>(j));
    return lg - barnes_tail(kBootstrapOrder);
  }();
  return c;
}

double log_barnes_g(double x) {
  if (!(x >= 1.0) || !std::isfinite(x)) throw DomainError("log_barnes_g: argument must be >= 1");
  double acc = 0.0;
  while (x < kShift) {
    acc -= std::lgamma(x);
    x += 1.0;
  }
  return acc + barnes_tail(x - 1.0) + barnes_g_constant();
}

LogValue origin_moment_exact(int n, double gamma) {
  if (n < 1) throw DomainError("origin_moment_exact: n must be >= 1");
  if (!(gamma >= 0)) throw DomainError("origin_moment_exact: gamma must be >= 0");
  if (gamma == 0) return {0.0};
  const double a = 0.5 * gamma;
  double s = 0.0;
  for (int j = 1; j <= n; ++j) s += std::lgamma(j + a) - std::lgamma(static_cast<double>(j));
  return {s - n * a * std::log(static_cast<double>(n))};
}

LogValue origin_moment_barnes(int n, double gamma) {
  if (n < 1) throw DomainError("origin_moment_barnes: n must be >= 1");
  if (!(gamma >= 0)) throw DomainError("origin_moment_barnes: gamma must be >= 0");
  const double a = 0.5 * gamma;
  return {-n * a * std::log(static_cast<double>(n)) + log_barnes_g(n + 1 + a) -
          log_barnes_g(n + 1.0) - log_barnes_g(1 + a)};
}

LogValue origin_moment_asymptotic(int n, double gamma) {
  if (n < 2) throw DomainError("origin_moment_asymptotic: n must be >= 2");
  if (!(gamma >= 0)) throw DomainError("origin_moment_asymptotic: gamma must be >= 0");
  if (gamma == 0) return {0.0};
  const double ln_n = std::log(static_cast<double>(n));
  return {-n * gamma / 2 + gamma * gamma / 8 * ln_n +
          gamma / 4 * std::log(2 * std::numbers::pi) - log_barnes_g(1 + gamma / 2)};
}

}  // namespace fhlab
