#pragma once

#include <Eigen/Core>
#include <cstdint>

namespace omdlab {

using Vec = Eigen::VectorXd;

/// SplitMix64 generator (Steele, Lea, Flood 2014): a 64-bit counter advanced
/// by the golden-ratio increment and finalized with a mix function. Chosen
/// because the output sequence is a pure function of (seed, counter), so
/// traces replay bit-for-bit and per-trial substreams can be split off by
/// index without coordination.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  /// Derives an independent substream for trial/cell `index` under `seed`.
  /// Stream k is SplitMix64 seeded with mix(seed ^ mix(index + 1)).
  static Rng stream(std::uint64_t seed, std::uint64_t index) {
    return Rng(mix(seed ^ mix(index + 1)));
  }

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    return mix(state_);
  }

  /// Uniform on [0, 1), 53-bit resolution.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1]; safe as a log argument.
  double next_positive_double() { return 1.0 - next_double(); }

  /// Standard normal via Box-Muller; consumes exactly two uniforms per call.
  double next_gaussian();

  Vec uniform_vec(int d, double lo, double hi);
  Vec gaussian_vec(int d);
  /// Uniform on the sphere of the given radius.
  Vec on_sphere(int d, double radius);
  /// Uniform in the closed ball of the given radius.
  Vec in_ball(int d, double radius);

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace omdlab
