#include <cmath>
#include <limits>
#include <sstream>

#include "fhlab/errors.hpp"
#include "fhlab/testfn.hpp"

namespace fhlab {

using cplx = std::complex<double>;

TestFn TestFn::harmonic_re(int k, double a) {
  if (k < 1) throw DomainError("HarmonicRe needs k >= 1");
  TestFn f;
  f.kind = TestFnKind::HarmonicRe;
  f.k = k;
  f.amplitude = a;
  return f;
}

TestFn TestFn::gaussian_bump(cplx c, double tau, double a) {
  if (!(tau > 0)) throw DomainError("bump scale must be positive");
  TestFn f;
  f.kind = TestFnKind::GaussianBump;
  f.center = c;
  f.tau = tau;
  f.amplitude = a;
  return f;
}

TestFn TestFn::compact_bump(cplx c, double tau, double a) {
  TestFn f = gaussian_bump(c, tau, a);
  f.kind = TestFnKind::CompactBump;
  return f;
}

TestFn TestFn::monomial(int k, cplx a) {
  if (k < 0) throw DomainError("Monomial needs k >= 0");
  TestFn f;
  f.kind = TestFnKind::Monomial;
  f.k = k;
  f.amplitude = a;
  return f;
}

bool TestFn::is_radial() const {
  switch (kind) {
    case TestFnKind::Zero: return true;
    case TestFnKind::GaussianBump:
    case TestFnKind::CompactBump: return center == cplx(0, 0);
    default: return false;
  }
}

double TestFn::scale() const {
  if (kind == TestFnKind::GaussianBump || kind == TestFnKind::CompactBump) return tau;
  return std::numeric_limits<double>::infinity();
}

double TestFn::support_radius() const {
  switch (kind) {
    case TestFnKind::Zero: return 0.0;
    case TestFnKind::GaussianBump: return 12.0 * tau;
    case TestFnKind::CompactBump: return tau;
    default: return std::numeric_limits<double>::infinity();
  }
}

cplx TestFn::eval(cplx z) const {
  switch (kind) {
    case TestFnKind::Zero: return offset;
    case TestFnKind::HarmonicRe: return amplitude.real() * std::pow(z, k).real() + offset;
    case TestFnKind::GaussianBump:
      return amplitude * std::exp(-std::norm(z - center) / (2 * tau * tau)) + offset;
    case TestFnKind::CompactBump: {
      const double t = std::norm(z - center) / (tau * tau);
      if (t >= 1) return offset;
      return amplitude * std::exp(-1.0 / (1.0 - t)) + offset;
    }
    case TestFnKind::Monomial: return amplitude * std::pow(z, k) + offset;
  }
  return 0.0;
}

cplx TestFn::del(cplx z) const {
  switch (kind) {
    case TestFnKind::Zero: return 0.0;
    case TestFnKind::HarmonicRe:
      return 0.5 * amplitude.real() * double(k) * std::pow(z, k - 1);
    case TestFnKind::GaussianBump: {
      const cplx u = z - center;
      return -(eval(z) - offset) * std::conj(u) / (2 * tau * tau);
    }
    case TestFnKind::CompactBump: {
      const cplx u = z - center;
      const double t = std::norm(u) / (tau * tau);
      if (t >= 1) return 0.0;
      const double s = 1.0 - t;
      const double du = -std::exp(-1.0 / s) / (s * s);
      return amplitude * du * std::conj(u) / (tau * tau);
    }
    case TestFnKind::Monomial:
      if (k == 0) return 0.0;
      return amplitude * double(k) * std::pow(z, k - 1);
  }
  return 0.0;
}

cplx TestFn::gradient(cplx z) const {
  if (!is_real()) throw DomainError("gradient is defined for real test functions only");
  return 2.0 * std::conj(del(z));
}

double TestFn::laplacian(cplx z) const {
  switch (kind) {
    case TestFnKind::Zero:
    case TestFnKind::HarmonicRe:
    case TestFnKind::Monomial: return 0.0;
    case TestFnKind::GaussianBump: {
      const double r2 = std::norm(z - center);
      const double t2 = tau * tau;
      return (eval(z).real() - offset) * (r2 / (t2 * t2) - 2.0 / t2);
    }
    case TestFnKind::CompactBump: {
      const double t = std::norm(z - center) / (tau * tau);
      if (t >= 1) return 0.0;
      const double s = 1.0 - t;
      const double u = std::exp(-1.0 / s);
      const double u1 = -u / (s * s);
      const double u2 = u * (1.0 / std::pow(s, 4) - 2.0 / std::pow(s, 3));
      return 4.0 * amplitude.real() / (tau * tau) * (u2 * t + u1);
    }
  }
  return 0.0;
}

std::string TestFn::describe() const {
  std::ostringstream os;
  switch (kind) {
    case TestFnKind::Zero: os << "zero"; break;
    case TestFnKind::HarmonicRe: os << "harmonic_re(k=" << k << ",a=" << amplitude.real() << ")"; break;
    case TestFnKind::GaussianBump:
      os << "gaussian_bump(c=" << center << ",tau=" << tau << ",a=" << amplitude.real() << ")";
      break;
    case TestFnKind::CompactBump:
      os << "compact_bump(c=" << center << ",tau=" << tau << ",a=" << amplitude.real() << ")";
      break;
    case TestFnKind::Monomial: os << "monomial(k=" << k << ",a=" << amplitude << ")"; break;
  }
  if (offset != 0) os << "+" << offset;
  return os.str();
}

}  // namespace fhlab
