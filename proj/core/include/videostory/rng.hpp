#ifndef VIDEOSTORY_RNG_HPP
#define VIDEOSTORY_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace videostory {

// Deterministic draws built directly on the mt19937_64 output stream.
// std::uniform_real_distribution / normal_distribution are implementation
// defined, which would break the byte-reproducibility contract.

inline double uniform01(std::mt19937_64& gen) {
  // in (0, 1), 53-bit resolution
  return (static_cast<double>(gen() >> 11) + 0.5) * 0x1.0p-53;
}

inline double gaussian(std::mt19937_64& gen) {
  const double u1 = uniform01(gen);
  const double u2 = uniform01(gen);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

// Fisher-Yates with an explicit draw sequence.
inline std::vector<std::size_t> random_permutation(std::size_t n,
                                                   std::mt19937_64& gen) {
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(gen() % i);
    std::swap(perm[i - 1], perm[j]);
  }
  return perm;
}

}  // namespace videostory

#endif
