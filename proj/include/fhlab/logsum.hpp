#pragma once

#include <cmath>
#include <complex>
#include <cstddef>

namespace fhlab {

// sum_i ln|z - p_i|, taking one log per block of eight squared distances.
// Falls back to plain logs when a block product leaves the normal range.
inline double sum_log_dist(const std::complex<double>* p, std::size_t n, std::complex<double> z) {
  double acc = 0.0;
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    double prod = 1.0;
    for (std::size_t j = 0; j < 8; ++j) prod *= std::norm(z - p[i + j]);
    if (prod > 1e-290 && prod < 1e290) {
      acc += std::log(prod);
    } else {
      for (std::size_t j = 0; j < 8; ++j) acc += std::log(std::norm(z - p[i + j]));
    }
  }
  for (; i < n; ++i) acc += std::log(std::norm(z - p[i]));
  return 0.5 * acc;
}

}  // namespace fhlab
