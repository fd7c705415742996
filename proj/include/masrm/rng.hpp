#pragma once

#include <array>
#include <cstdint>

#include "masrm/types.hpp"

namespace masrm {

/// Deterministic PRNG (xoshiro256++) with explicitly specified sampling
/// transforms. Standard-library distributions are implementation-defined,
/// which would break bit-reproducibility of results across toolchains, so
/// uniform and normal variates are generated by hand here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  /// Uniform on [0, 1) with 53-bit resolution.
  double uniform();

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi);

  /// Standard normal via Box-Muller; the paired deviate is cached.
  double normal();

  /// Circularly symmetric complex Gaussian with E|z|^2 = variance.
  Complex complex_normal(double variance);

 private:
  std::array<std::uint64_t, 4> state_{};
  bool has_spare_{false};
  double spare_{0.0};
};

enum class RngPurpose : std::uint64_t {
  Geometry = 1,  // path angles, distances, path responses
  Init = 2,      // precoder initialization
  Rpa = 3,       // random antenna placement
  Perturb = 4,   // channel-knowledge errors
};

/// Independent substream for (base_seed, trial, purpose). Trials are seeded
/// as base_seed + trial so that all schemes run against paired draws, while
/// the purpose split keeps consumption in one stage from shifting another.
Rng substream(std::uint64_t base_seed, std::uint64_t trial, RngPurpose purpose);
std::uint64_t substream_seed(std::uint64_t base_seed, std::uint64_t trial,
                             RngPurpose purpose);

/// SplitMix64-mixed seed derivation (also used for hashing test fixtures).
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c);

}  // namespace masrm
