#include "tmr/signal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tmr/error.hpp"

namespace tmr {

std::string_view channel_name(Channel c) {
  static constexpr std::array<std::string_view, kChannelCount> names{
      "accel_x", "accel_y", "accel_z", "gyro_x",    "gyro_y",   "gyro_z",
      "rotvec_x", "rotvec_y", "rotvec_z", "accel_sum", "gyro_sum", "rotvec_sum"};
  return names[static_cast<std::size_t>(c)];
}

double interpolate_at(std::span<const Sample> samples, double t) {
  if (samples.size() < 2) throw InvalidArgument("interpolate_at: need at least 2 samples");
  if (t < samples.front().t || t > samples.back().t)
    throw InvalidArgument("interpolate_at: query outside the sample span");
  auto it = std::upper_bound(samples.begin(), samples.end(), t,
                             [](double q, const Sample& s) { return q < s.t; });
  if (it == samples.end()) return samples.back().v;
  const Sample& hi = *it;
  const Sample& lo = *(it - 1);
  const double w = (t - lo.t) / (hi.t - lo.t);
  return lo.v + w * (hi.v - lo.v);
}

ResampledChannels interpolate_resample(const SensorTrace& trace, double target_hz) {
  if (!(target_hz > 0.0)) throw InvalidArgument("interpolate_resample: target rate must be positive");
  trace.validate();

  double start = -std::numeric_limits<double>::infinity();
  double end = std::numeric_limits<double>::infinity();
  for (const auto& ch : trace.channels) {
    start = std::max(start, ch.front().t);
    end = std::min(end, ch.back().t);
  }

  ResampledChannels out;
  out.rate_hz = target_hz;
  out.start_time = start;
  if (!(end >= start)) return out;  // channels do not overlap: nothing to resample

  const double step = 1.0 / target_hz;
  auto n = static_cast<std::size_t>(std::floor((end - start) * target_hz)) + 1;
  while (n > 0 && start + static_cast<double>(n - 1) * step > end) --n;

  for (int c = 0; c < kAxisChannelCount; ++c) {
    const auto& src = trace.channels[static_cast<std::size_t>(c)];
    auto& dst = out.values[static_cast<std::size_t>(c)];
    dst.resize(n);
    std::size_t seg = 0;
    for (std::size_t m = 0; m < n; ++m) {
      const double t = start + static_cast<double>(m) * step;
      while (seg + 2 < src.size() && src[seg + 1].t < t) ++seg;
      const Sample& lo = src[seg];
      const Sample& hi = src[seg + 1];
      const double w = (t - lo.t) / (hi.t - lo.t);
      dst[m] = lo.v + w * (hi.v - lo.v);
    }
  }
  return out;
}

void derive_sum_channels(ResampledChannels& channels, SumMode mode) {
  const std::size_t n = channels.length();
  for (int s = 0; s < 3; ++s) {
    const auto& x = channels.values[static_cast<std::size_t>(s * 3)];
    const auto& y = channels.values[static_cast<std::size_t>(s * 3 + 1)];
    const auto& z = channels.values[static_cast<std::size_t>(s * 3 + 2)];
    if (x.size() != n || y.size() != n || z.size() != n)
      throw InvalidArgument("derive_sum_channels: sensor " +
                            std::string(sensor_name(static_cast<Sensor>(s))) + " is missing an axis");
    auto& sum = channels.values[static_cast<std::size_t>(kAxisChannelCount + s)];
    sum.resize(n);
    for (std::size_t k = 0; k < n; ++k)
      sum[k] = mode == SumMode::Algebraic ? x[k] + y[k] + z[k]
                                          : std::sqrt(x[k] * x[k] + y[k] * y[k] + z[k] * z[k]);
  }
}

std::vector<Window> segment_windows(const ResampledChannels& channels, Mode mode, double width_s) {
  const auto width = static_cast<std::size_t>(std::llround(width_s * channels.rate_hz));
  if (width != kWindowSamples)
    throw InvalidArgument("segment_windows: windows must hold exactly " + std::to_string(kWindowSamples) +
                          " samples (1 s at 100 Hz)");
  const std::size_t n = channels.length();
  for (const auto& v : channels.values)
    if (v.size() != n)
      throw InvalidArgument("segment_windows: channels differ in length (derive the sum channels first)");

  std::vector<Window> windows(n / width);
  for (std::size_t w = 0; w < windows.size(); ++w) {
    windows[w].mode = mode;
    for (int c = 0; c < kChannelCount; ++c) {
      const auto& src = channels.values[static_cast<std::size_t>(c)];
      std::copy_n(src.begin() + static_cast<std::ptrdiff_t>(w * width), width,
                  windows[w].channels[static_cast<std::size_t>(c)].begin());
    }
  }
  return windows;
}

std::vector<double> derivative(std::span<const double> series, double dt) {
  if (series.size() < 2) throw InvalidArgument("derivative: need at least 2 samples");
  std::vector<double> out(series.size() - 1);
  for (std::size_t k = 0; k + 1 < series.size(); ++k) out[k] = (series[k + 1] - series[k]) / dt;
  return out;
}

std::vector<Window> trace_windows(const SensorTrace& trace, SumMode mode) {
  auto channels = interpolate_resample(trace);
  derive_sum_channels(channels, mode);
  return segment_windows(channels, trace.mode);
}

}  // namespace tmr
