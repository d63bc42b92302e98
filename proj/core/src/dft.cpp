#include "tmr/dft.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "tmr/error.hpp"
#include "tmr/signal.hpp"

namespace tmr {

FftPlan::FftPlan(std::size_t n) : n_(n) {
  if (n == 0) throw InvalidArgument("FftPlan: length must be positive");
  std::size_t rest = n;
  for (std::size_t p = 2; p * p <= rest; ++p)
    while (rest % p == 0) {
      factors_.push_back(p);
      rest /= p;
    }
  if (rest > 1) factors_.push_back(rest);
  twiddle_.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double angle = -2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
    twiddle_[j] = {std::cos(angle), std::sin(angle)};
  }
}

// Decimation in time: split into p interleaved subsequences of length n/p,
// transform each, then combine with twiddles.
void FftPlan::recurse(const std::complex<double>* in, std::size_t stride, std::size_t n,
                      std::size_t factor_pos, std::complex<double>* out) const {
  if (n == 1) {
    out[0] = in[0];
    return;
  }
  const std::size_t p = factors_[factor_pos];
  const std::size_t m = n / p;
  for (std::size_t r = 0; r < p; ++r) recurse(in + r * stride, stride * p, m, factor_pos + 1, out + r * m);

  // twiddle_[j * tw_step] == exp(-2 pi i j / n)
  const std::size_t tw_step = n_ / n;
  std::complex<double> scratch[64];
  std::vector<std::complex<double>> heap;
  std::complex<double>* tmp = scratch;
  if (p > 64) {
    heap.resize(p);
    tmp = heap.data();
  }
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t r = 0; r < p; ++r) tmp[r] = out[r * m + k];
    for (std::size_t q = 0; q < p; ++q) {
      const std::size_t kk = k + q * m;
      std::complex<double> acc = tmp[0];
      for (std::size_t r = 1; r < p; ++r) acc += twiddle_[((r * kk) % n) * tw_step] * tmp[r];
      out[kk] = acc;
    }
  }
}

void FftPlan::forward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const {
  if (in.size() != n_ || out.size() != n_) throw InvalidArgument("FftPlan::forward: length mismatch");
  recurse(in.data(), 1, n_, 0, out.data());
}

std::vector<std::complex<double>> FftPlan::forward_real(std::span<const double> in) const {
  if (in.size() != n_) throw InvalidArgument("FftPlan::forward_real: length mismatch");
  std::vector<std::complex<double>> buf(in.begin(), in.end());
  std::vector<std::complex<double>> out(n_);
  forward(buf, out);
  return out;
}

const FftPlan& window_fft_plan() {
  static const FftPlan plan(kWindowSamples);
  return plan;
}

std::vector<double> dft_magnitudes(std::span<const double> series) {
  if (series.size() != static_cast<std::size_t>(kWindowSamples))
    throw InvalidArgument("dft_magnitudes: expected " + std::to_string(kWindowSamples) + " samples, got " +
                          std::to_string(series.size()));
  const auto spectrum = window_fft_plan().forward_real(series);
  std::vector<double> mags(kWindowSamples / 2 + 1);
  for (std::size_t k = 0; k < mags.size(); ++k) mags[k] = std::abs(spectrum[k]);
  return mags;
}

}  // namespace tmr
