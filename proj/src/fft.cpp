#include "liek/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>

namespace liek::fft {
namespace {

// One cached plan per (size, sign). Plans are created with FFTW_UNALIGNED so
// fftw_execute_dft may run on any caller buffer, concurrently.
fftw_plan get_plan(int n, int sign) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(n, sign);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<std::complex<double>> scratch(n);
  auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
  fftw_plan plan =
      fftw_plan_dft_1d(n, p, p, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!plan) throw std::runtime_error("fftw plan creation failed");
  cache.emplace(key, plan);
  return plan;
}

void execute(std::vector<std::complex<double>>& buf, int sign) {
  if (buf.empty()) throw std::invalid_argument("fft: empty buffer");
  fftw_plan plan = get_plan(static_cast<int>(buf.size()), sign);
  auto* p = reinterpret_cast<fftw_complex*>(buf.data());
  fftw_execute_dft(plan, p, p);
}

}  // namespace

void forward(std::vector<std::complex<double>>& buf) {
  execute(buf, FFTW_FORWARD);
}

void backward_raw(std::vector<std::complex<double>>& buf) {
  execute(buf, FFTW_BACKWARD);
}

void inverse(std::vector<std::complex<double>>& buf) {
  execute(buf, FFTW_BACKWARD);
  const double scale = 1.0 / static_cast<double>(buf.size());
  for (auto& z : buf) z *= scale;
}

int mode_number(int k, int n) {
  return (k < (n + 1) / 2 || (n % 2 == 0 && k == n / 2)) ? k : k - n;
}

}  // namespace liek::fft
