#pragma once

#include <cmath>
#include <cstdint>

namespace remest {

/// Counter-based pseudo-random generator (SplitMix64 core).
///
/// A stream is identified by a 64-bit key; advancing the stream is a counter
/// increment followed by a mixing function, so any number of decorrelated
/// child streams can be derived from a master seed without sharing state.
/// Parallel simulations assign stream(i) to episode i, which makes results
/// reproducible and independent of scheduling.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : key_(seed), counter_(0) {}

  /// Next raw 64-bit word.
  std::uint64_t operator()() {
    std::uint64_t z = key_ + (++counter_) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform double in the open interval (0, 1); safe to pass to log().
  double uniform_open() {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal variate (Box-Muller, cosine branch only, stateless).
  double normal() {
    const double u1 = uniform_open();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(6.283185307179586477 * u2);
  }

  /// Independent child stream. Derivation depends only on the seed this
  /// object was constructed with, not on how far it has advanced.
  Rng stream(std::uint64_t index) const {
    std::uint64_t z = key_ ^ (0xA0761D6478BD642Full + index * 0xE7037ED1A0B428DBull);
    z = (z ^ (z >> 32)) * 0xD6E8FEB86659FD93ull;
    z = (z ^ (z >> 32)) * 0xD6E8FEB86659FD93ull;
    return Rng(z ^ (z >> 32));
  }

  static constexpr std::uint64_t min() { return 0; }
  static constexpr std::uint64_t max() { return ~0ull; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_;
};

}  // namespace remest
