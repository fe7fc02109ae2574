#include "bosonlab/random.hpp"

#include <cmath>

namespace bosonlab {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t task_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return mix64(master ^ mix64(index + 0x9E3779B97F4A7C15ULL));
}

Amplitudes gaussian_amplitudes(std::size_t n, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
  Amplitudes a(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    a[i] = {re, im};
  }
  return a;
}

StateVector haar_random_state(const FockSpace& space, Rng& rng) {
  return StateVector::normalized(space, gaussian_amplitudes(space.dimension(), rng));
}

}  // namespace bosonlab
