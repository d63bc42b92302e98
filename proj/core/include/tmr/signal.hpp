#pragma once

#include <array>
#include <span>
#include <string_view>
#include <vector>

#include "tmr/datagen.hpp"

namespace tmr {

/// The 9 axis channels followed by the three per-sensor summation channels.
enum class Channel : int {
  AccelX, AccelY, AccelZ,
  GyroX, GyroY, GyroZ,
  RotvecX, RotvecY, RotvecZ,
  AccelSum, GyroSum, RotvecSum,
};

inline constexpr int kChannelCount = 12;
inline constexpr double kResampleRateHz = 100.0;
inline constexpr int kWindowSamples = 100;  // 1 s at 100 Hz

std::string_view channel_name(Channel c);  // "accel_x", ..., "accel_sum"
constexpr int channel_index(Channel c) { return static_cast<int>(c); }

/// How the summation channels combine the three axes.
enum class SumMode { Algebraic, Norm };

struct ResampledChannels {
  double rate_hz = kResampleRateHz;
  double start_time = 0.0;
  std::array<std::vector<double>, kChannelCount> values;  // sums empty until derived

  std::size_t length() const { return values[0].size(); }
  std::vector<double>& operator[](Channel c) { return values[static_cast<std::size_t>(c)]; }
  const std::vector<double>& operator[](Channel c) const { return values[static_cast<std::size_t>(c)]; }
};

struct Window {
  Mode mode = Mode::Bike;
  std::array<std::array<double, kWindowSamples>, kChannelCount> channels{};

  std::span<const double, kWindowSamples> operator[](Channel c) const {
    return channels[static_cast<std::size_t>(c)];
  }
  std::span<double, kWindowSamples> operator[](Channel c) { return channels[static_cast<std::size_t>(c)]; }
  static constexpr double dt = 1.0 / kResampleRateHz;
};

/// Piecewise-linear value of `samples` at `t`; t must lie inside the
/// sample span.
double interpolate_at(std::span<const Sample> samples, double t);

/// Resamples every axis channel onto a common uniform grid spanning
/// [latest first timestamp, earliest last timestamp]; never extrapolates.
ResampledChannels interpolate_resample(const SensorTrace& trace, double target_hz = kResampleRateHz);

/// Fills the three summation channels from the axis channels.
void derive_sum_channels(ResampledChannels& channels, SumMode mode = SumMode::Algebraic);

/// Non-overlapping windows of `width_s`; the trailing remainder is dropped.
std::vector<Window> segment_windows(const ResampledChannels& channels, Mode mode, double width_s = 1.0);

/// Forward difference (s[k+1] - s[k]) / dt, length N-1.
std::vector<double> derivative(std::span<const double> series, double dt);

/// Convenience: resample, derive sums and cut windows for one trace.
std::vector<Window> trace_windows(const SensorTrace& trace, SumMode mode = SumMode::Algebraic);

}  // namespace tmr
