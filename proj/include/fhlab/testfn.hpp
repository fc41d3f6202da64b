#pragma once

#include <complex>
#include <string>

namespace fhlab {

enum class TestFnKind { Zero, HarmonicRe, GaussianBump, CompactBump, Monomial };

// Smooth test functions used as f in moment queries and h, g in the
// Ward and isotropy statistics.
//   HarmonicRe    f = a Re z^k
//   GaussianBump  f = a exp(-|z-c|^2 / (2 tau^2))
//   CompactBump   f = a exp(-1/(1-|z-c|^2/tau^2)) on |z-c| < tau
//   Monomial      h = a z^k (complex valued)
// `offset` is added to the value of any kind.
struct TestFn {
  TestFnKind kind = TestFnKind::Zero;
  int k = 1;
  std::complex<double> amplitude{1.0, 0.0};
  std::complex<double> center{0.0, 0.0};
  double tau = 1.0;
  double offset = 0.0;

  static TestFn zero() { return {}; }
  static TestFn harmonic_re(int k, double a);
  static TestFn gaussian_bump(std::complex<double> c, double tau, double a);
  static TestFn compact_bump(std::complex<double> c, double tau, double a);
  static TestFn monomial(int k, std::complex<double> a);

  bool is_real() const { return kind != TestFnKind::Monomial; }
  // Radially symmetric about the origin.
  bool is_radial() const;
  bool is_zero() const { return kind == TestFnKind::Zero && offset == 0; }
  // Length scale relevant to the mesoscopic constraint; infinite for global kinds.
  double scale() const;
  // Radius outside which the function equals its offset (up to 1e-30).
  double support_radius() const;

  std::complex<double> eval(std::complex<double> z) const;
  double value(std::complex<double> z) const { return eval(z).real(); }
  std::complex<double> del(std::complex<double> z) const;  // d/dz
  std::complex<double> gradient(std::complex<double> z) const;  // f_x + i f_y, real kinds
  double laplacian(std::complex<double> z) const;
  std::string describe() const;
};

}  // namespace fhlab
