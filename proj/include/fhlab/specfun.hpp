#pragma once

namespace fhlab {

// Natural log of a positive quantity.  Moments travel between modules in
// this form and are exponentiated only when reported.
struct LogValue {
  double log_magnitude = 0.0;
};

double log_gamma(double x);
double trigamma(double x);

// ln G(x) for x >= 1.
double log_barnes_g(double x);

// Constant term of the large-argument expansion of ln G(z+1), fixed by
// matching the product formula G(m+1) = prod_{j<=m} Gamma(j).
double barnes_g_constant();

// ln E prod_k |z_k|^gamma for an n x n Ginibre matrix.
LogValue origin_moment_exact(int n, double gamma);
// Same quantity as a Barnes G quotient; used to cross-check the sum form.
LogValue origin_moment_barnes(int n, double gamma);
LogValue origin_moment_asymptotic(int n, double gamma);

}  // namespace fhlab
