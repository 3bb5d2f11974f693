#pragma once

#include <cstdint>
#include <random>

namespace ircg {

/// Deterministic 64-bit generator with explicit stream derivation.
///
/// The engine is std::mt19937_64 (bit-exact across standard libraries); the
/// index, uniform and normal draws are implemented here so that sample
/// sequences do not depend on library-specific distribution code.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform integer in [0, n), n >= 1.
  std::uint64_t index(std::uint64_t n);
  /// Uniform double in [0, 1).
  double uniform();
  double normal();

  /// Seed of an independent stream derived from a master seed.
  static std::uint64_t derive(std::uint64_t master, std::uint64_t stream);

  bool operator==(const Rng& other) const { return engine_ == other.engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ircg
