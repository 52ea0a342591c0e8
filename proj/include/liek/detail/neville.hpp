#pragma once

#include <complex>
#include <vector>

namespace liek::detail {

// Polynomial extrapolation of samples (t_j, v_j) to t = 0, in place. When
// tail is given it receives |last stage - previous stage|, the usual error
// estimate of the extrapolation.
inline std::complex<double> neville_at_zero(
    const std::vector<double>& t, std::vector<std::complex<double>> v,
    double* tail = nullptr) {
  const int n = static_cast<int>(v.size());
  std::complex<double> prev = v[n - 1];
  for (int level = 1; level < n; ++level) {
    for (int j = 0; j + level < n; ++j) {
      v[j] =
          v[j + 1] + (v[j + 1] - v[j]) * t[j + level] / (t[j] - t[j + level]);
    }
    if (level == n - 2) prev = v[0];
  }
  if (tail) *tail = std::abs(v[0] - prev);
  return v[0];
}

}  // namespace liek::detail
