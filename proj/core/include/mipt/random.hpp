#pragma once

#include <cstdint>
#include <random>

namespace mipt {

/// splitmix64 scrambler; used to turn (base seed, stream index) pairs into
/// well-separated generator seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for stream `index` derived from a base seed. Streams are
/// statistically independent, so ensembles can run in any order or in
/// parallel and still reproduce bit-for-bit.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  return splitmix64(base ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
}

/// mt19937_64 wrapper producing uniforms via the 53-bit mantissa trick.
/// Avoids std::uniform_real_distribution, whose output is not pinned down
/// by the standard, so streams are identical across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(splitmix64(seed)) {}

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  std::uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace mipt
