#pragma once

#include <complex>
#include <vector>

namespace liek::fft {

// In-place complex DFT of length n = buf.size().
//   forward:  X_k = sum_j x_j exp(-2*pi*i*j*k/n)      (no normalization)
//   inverse:  x_j = (1/n) sum_k X_k exp(+2*pi*i*j*k/n)
// Plans are cached per (n, direction); execution is thread safe, planning
// is serialized internally.
void forward(std::vector<std::complex<double>>& buf);
void inverse(std::vector<std::complex<double>>& buf);

// Unnormalized backward transform: sum_k X_k exp(+2*pi*i*j*k/n).
void backward_raw(std::vector<std::complex<double>>& buf);

// Signed integer mode number for DFT index k of an n-point transform:
// k for k < n/2, k - n otherwise. Index n/2 (even n) is the Nyquist mode.
int mode_number(int k, int n);

}  // namespace liek::fft
