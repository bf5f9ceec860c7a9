// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace beamsched {

using Rng = std::mt19937_64;

// SplitMix64 finalizer over a counter stream. Stream i of a master seed is
// splitmix64(master + (i + 1) * golden_gamma), so per-trial seeds are fixed
// by (master, trial) alone, no matter how trials are spread over threads.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master + (stream + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Standard circularly-symmetric complex Gaussian: variance 1/2 per
// real/imaginary component, unit variance overall.
inline std::complex<double> draw_cn(Rng& rng) {
  std::normal_distribution<double> component(0.0, std::sqrt(0.5));
  const double re = component(rng);
  const double im = component(rng);
  return {re, im};
}

}  // namespace beamsched
