#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace tmr {

/// Mixed-radix Cooley-Tukey plan for a fixed length. Unnormalised forward
/// transform: X[k] = sum_n x[n] exp(-2 pi i k n / N).
class FftPlan {
public:
  explicit FftPlan(std::size_t n);

  std::size_t size() const { return n_; }
  void forward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const;
  std::vector<std::complex<double>> forward_real(std::span<const double> in) const;

private:
  void recurse(const std::complex<double>* in, std::size_t stride, std::size_t n,
               std::size_t factor_pos, std::complex<double>* out) const;

  std::size_t n_;
  std::vector<std::size_t> factors_;
  std::vector<std::complex<double>> twiddle_;  // exp(-2 pi i j / N), j < N
};

/// Shared plan for the 100-sample window length.
const FftPlan& window_fft_plan();

/// |X[k]| for k = 0..50 of a 100-sample series. Throws InvalidArgument for
/// any other length.
std::vector<double> dft_magnitudes(std::span<const double> series);

}  // namespace tmr
