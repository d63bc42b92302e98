#include <benchmark/benchmark.h>

#include <random>

#include "tmr/classifier.hpp"
#include "tmr/dft.hpp"
#include "tmr/features.hpp"

namespace {

std::vector<double> noise(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = g(rng);
  return v;
}

void blobs(std::size_t n, std::size_t dim, tmr::Matrix& X, std::vector<int>& y) {
  const auto v = noise(n * dim, 3);
  X = tmr::Matrix(n, dim);
  y.resize(n);
  for (std::size_t r = 0; r < n; ++r) {
    y[r] = static_cast<int>(r % 2);
    for (std::size_t c = 0; c < dim; ++c) X(r, c) = v[r * dim + c] + (c == 0 ? 1.5 * y[r] : 0.0);
  }
}

void BM_DftMagnitudes(benchmark::State& state) {
  const auto x = noise(100, 1);
  for (auto _ : state) benchmark::DoNotOptimize(tmr::dft_magnitudes(x));
}
BENCHMARK(BM_DftMagnitudes);

void BM_PooledFeatures(benchmark::State& state) {
  tmr::Window w;
  const auto v = noise(tmr::kWindowSamples * tmr::kChannelCount, 2);
  for (std::size_t c = 0; c < w.channels.size(); ++c)
    std::copy_n(v.begin() + static_cast<long>(c * tmr::kWindowSamples), tmr::kWindowSamples, w.channels[c].begin());
  for (auto _ : state) benchmark::DoNotOptimize(tmr::extract_features(w, tmr::FeatureDomain::Pooled));
}
BENCHMARK(BM_PooledFeatures);

void BM_CartGrowth(benchmark::State& state) {
  tmr::Matrix X;
  std::vector<int> y;
  blobs(static_cast<std::size_t>(state.range(0)), 20, X, y);
  for (auto _ : state) benchmark::DoNotOptimize(tmr::cart_train(X, y));
}
BENCHMARK(BM_CartGrowth)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

void BM_SmoSolve(benchmark::State& state) {
  tmr::Matrix X;
  std::vector<int> y;
  blobs(static_cast<std::size_t>(state.range(0)), 20, X, y);
  std::vector<int> signs;
  for (int v : y) signs.push_back(v == 0 ? 1 : -1);
  for (auto _ : state) benchmark::DoNotOptimize(tmr::smo_solve(X, signs, tmr::SvmParams{}, 0.05));
}
BENCHMARK(BM_SmoSolve)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
