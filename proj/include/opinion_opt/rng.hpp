#ifndef OPINION_OPT_RNG_HPP
#define OPINION_OPT_RNG_HPP

#include <cstdint>
#include <random>

namespace opinion_opt {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seeded 64-bit stream with platform-independent real draws.
///
/// Substreams: `Rng(seed, stream)` mixes the stream id into the seed with
/// splitmix64, so each named field of a generated instance owns an
/// independent sequence and adding a new field never shifts existing draws.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : engine_(splitmix64(splitmix64(seed) ^ splitmix64(0xA5A5A5A5ULL + stream))) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on [a, b).
  double uniform(double a, double b) {
    const double x = a + (b - a) * uniform01();
    return x < b ? x : a;
  }

  bool bernoulli(double prob) { return uniform01() < prob; }

 private:
  // mt19937_64's output sequence is fixed by the standard.
  std::mt19937_64 engine_;
};

/// Stream ids used by instance generation.
namespace streams {
inline constexpr std::uint64_t kInnateOpinion = 1;
inline constexpr std::uint64_t kEdgeWeight = 2;
inline constexpr std::uint64_t kLowerBound = 3;
inline constexpr std::uint64_t kUpperBound = 4;
inline constexpr std::uint64_t kInitialResistance = 5;
inline constexpr std::uint64_t kSynthetic = 100;
}  // namespace streams

}  // namespace opinion_opt

#endif  // OPINION_OPT_RNG_HPP
