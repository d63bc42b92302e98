#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace tmr {

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);

/// Seed-splitting rule used by every stage: a child seed is
/// splitmix64(seed ^ fnv1a(stage)) mixed with splitmix64(index).
/// One top-level seed therefore reproduces every random stream.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view stage, std::uint64_t index = 0);

}  // namespace tmr
