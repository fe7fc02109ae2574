#pragma once

#include <cstdint>
#include <random>

#include "bosonlab/fock_space.hpp"

namespace bosonlab {

using Rng = std::mt19937_64;

/// One SplitMix64 step: add 0x9E3779B97F4A7C15, then the finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Seed for task `index` of a run seeded with `master`:
/// mix64(master ^ mix64(index + 0x9E3779B97F4A7C15)). Frozen; reports depend on it.
std::uint64_t task_seed(std::uint64_t master, std::uint64_t index) noexcept;

/// Haar-random pure state: i.i.d. complex Gaussian amplitudes, normalized.
StateVector haar_random_state(const FockSpace& space, Rng& rng);

/// Complex Gaussian vector with E|z_i|^2 = 1.
Amplitudes gaussian_amplitudes(std::size_t n, Rng& rng);

}  // namespace bosonlab
