#include "ircg/rng.hpp"

#include <cmath>

namespace ircg {

std::uint64_t Rng::index(std::uint64_t n) {
  // Multiply-shift reduction of a 64-bit draw onto [0, n).
  const unsigned __int128 product = static_cast<unsigned __int128>(engine_()) * n;
  return static_cast<std::uint64_t>(product >> 64);
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  // Marsaglia polar method, one output per accepted pair.
  for (;;) {
    const double u = 2.0 * uniform() - 1.0;
    const double v = 2.0 * uniform() - 1.0;
    const double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
  }
}

std::uint64_t Rng::derive(std::uint64_t master, std::uint64_t stream) {
  // splitmix64 finalizer over (master, stream)
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace ircg
