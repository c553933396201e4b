#ifndef HKB_RANDOM_HPP
#define HKB_RANDOM_HPP

// Reproducible sampling helpers. std::mt19937_64 is fully specified by the
// standard; the distributions in <random> are not, so bounded integers are
// drawn here by rejection to keep reports byte-identical across platforms.

#include <cstdint>
#include <random>

namespace hkb {

inline constexpr std::uint64_t kDefaultSeed = 0xC0FFEE;

using Rng = std::mt19937_64;

inline std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
  if (n <= 1) return 0;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Independent stream for item `index` of a run seeded with `seed`.
inline Rng stream_rng(std::uint64_t seed, std::uint64_t index) {
  return Rng(splitmix64(seed ^ splitmix64(index + 1)));
}

}  // namespace hkb

#endif  // HKB_RANDOM_HPP
