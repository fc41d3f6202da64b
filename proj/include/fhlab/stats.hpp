#pragma once

#include <functional>
#include <vector>

namespace fhlab {

double mean(const std::vector<double>& x);
double variance(const std::vector<double>& x);  // unbiased
double std_error(const std::vector<double>& x);
double median(std::vector<double> x);

// Standard error of the unbiased sample variance.
double variance_std_error(const std::vector<double>& x);

double ks_one_sample(std::vector<double> x, const std::function<double(double)>& cdf);
double ks_two_sample(std::vector<double> a, std::vector<double> b);
// Asymptotic p-value of the Kolmogorov distribution at sqrt(m_eff) * d.
double ks_pvalue(double d, double m_eff);

struct LinearFit {
  double slope = 0, intercept = 0, r2 = 0;
};
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace fhlab
