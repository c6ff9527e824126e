#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace skitrain {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// FNV-1a over the tag bytes, used to key independent streams.
constexpr std::uint64_t tag_hash(std::string_view tag) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

/// SplitMix64 generator. Streams are keyed by (seed, purpose tag) so each
/// consumer draws from an independent, reproducible sequence regardless of
/// how many values other consumers take.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}
  constexpr SplitMix64(std::uint64_t seed, std::string_view tag)
      : state_(mix64(seed ^ mix64(tag_hash(tag)))) {}
  constexpr SplitMix64(std::uint64_t seed, std::string_view tag, std::uint64_t index)
      : state_(mix64(mix64(seed ^ mix64(tag_hash(tag))) + index * 0x9E3779B97F4A7C15ULL)) {}

  constexpr std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix64(state_);
  }

  /// Uniform in [0, 1) with 53 bits of resolution.
  constexpr double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  constexpr double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller; consumes two draws per call.
  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
  }

 private:
  std::uint64_t state_;
};

}  // namespace skitrain
