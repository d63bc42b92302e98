#include "tmr/measures.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "tmr/dft.hpp"
#include "tmr/error.hpp"

namespace tmr::measures {

namespace {
void require_nonempty(std::span<const double> s) {
  if (s.empty()) throw InvalidArgument("measure of an empty series");
}
}  // namespace

double mean(std::span<const double> s) {
  require_nonempty(s);
  double sum = 0.0;
  for (double v : s) sum += v;
  return sum / static_cast<double>(s.size());
}

double max(std::span<const double> s) {
  require_nonempty(s);
  return *std::max_element(s.begin(), s.end());
}

double min(std::span<const double> s) {
  require_nonempty(s);
  return *std::min_element(s.begin(), s.end());
}

double variance(std::span<const double> s) {
  const double m = mean(s);
  double acc = 0.0;
  for (double v : s) acc += (v - m) * (v - m);
  return acc / static_cast<double>(s.size());
}

double stddev(std::span<const double> s) { return std::sqrt(variance(s)); }

double range(std::span<const double> s) {
  require_nonempty(s);
  auto [lo, hi] = std::minmax_element(s.begin(), s.end());
  return *hi - *lo;
}

namespace {
double sorted_quantile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}
}  // namespace

double quantile(std::span<const double> s, double q) {
  require_nonempty(s);
  std::vector<double> sorted(s.begin(), s.end());
  std::sort(sorted.begin(), sorted.end());
  return sorted_quantile(sorted, q);
}

double iqr(std::span<const double> s) {
  require_nonempty(s);
  std::vector<double> sorted(s.begin(), s.end());
  std::sort(sorted.begin(), sorted.end());
  return sorted_quantile(sorted, 0.75) - sorted_quantile(sorted, 0.25);
}

double sign_changes(std::span<const double> s) {
  std::size_t count = 0;
  for (std::size_t k = 0; k + 1 < s.size(); ++k)
    if (s[k] * s[k + 1] < 0.0) ++count;
  return static_cast<double>(count);
}

double energy(std::span<const double> s) {
  double acc = 0.0;
  for (double v : s) acc += v * v;
  return acc;
}

double spectral_entropy(std::span<const double> s) {
  if (s.size() < 4) throw InvalidArgument("spectral_entropy: series too short");
  const bool window_length = s.size() == window_fft_plan().size();
  const FftPlan local = window_length ? FftPlan(1) : FftPlan(s.size());
  const FftPlan& plan = window_length ? window_fft_plan() : local;
  const auto spectrum = plan.forward_real(s);

  const std::size_t bins = s.size() / 2;
  std::vector<double> power(bins);
  double total = 0.0;
  for (std::size_t k = 1; k <= bins; ++k) {
    power[k - 1] = std::norm(spectrum[k]);
    total += power[k - 1];
  }
  if (!(total > 0.0)) return 0.0;
  double h = 0.0;
  for (double p : power) {
    if (p <= 0.0) continue;
    const double q = p / total;
    h -= q * std::log(q);
  }
  return std::clamp(h / std::log(static_cast<double>(bins)), 0.0, 1.0);
}

}  // namespace tmr::measures
