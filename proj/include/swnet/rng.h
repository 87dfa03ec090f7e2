#pragma once

#include <cstdint>
#include <random>

namespace swnet {

using Rng = std::mt19937_64;

// SplitMix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed for sub-stream `index` of `stream` under `master`. Results depend only
// on the three inputs, never on scheduling.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                    std::uint64_t index) {
  return mix64(mix64(master ^ mix64(stream)) + index);
}

// Uniform on [0, 1).
template <std::uniform_random_bit_generator G>
double unit_uniform(G& gen) {
  return std::generate_canonical<double, 53>(gen);
}

}  // namespace swnet
