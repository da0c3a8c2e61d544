#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace gencert {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Order-sensitive combination of two 64-bit keys.
inline constexpr std::uint64_t mix_keys(std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(a) ^ (b + 0x632be59bd9b4e019ULL + (a << 6) + (a >> 2)));
}

/// FNV-1a; stable across platforms, used to key per-id random streams.
inline constexpr std::uint64_t hash_string(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Seed for a named sub-task (a grid cell, a trial) derived from a master seed.
inline constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag) {
  return mix_keys(master, tag);
}

/// Counter-based generator: the i-th draw of stream (key, stream) is a pure
/// function of (key, stream, i). Streams never share state, so results do not
/// depend on which worker consumes them.
class CounterRng {
 public:
  CounterRng(std::uint64_t key, std::uint64_t stream)
      : base_(mix_keys(key, stream)) {}

  std::uint64_t next_u64() { return splitmix64(base_ ^ splitmix64(counter_++)); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1].
  double uniform_pos() { return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53; }

  /// Unbiased integer in [0, bound); bound > 0.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % bound;
  }

  /// Standard normal via Box-Muller; consumes exactly two draws.
  double normal() {
    const double u1 = uniform_pos();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  bool bernoulli(double p) { return uniform() < p; }

  /// Binomial(trials, p) by summing Bernoulli draws. Intended for the small
  /// trial counts used by the concentration checks.
  unsigned binomial(unsigned trials, double p) {
    unsigned k = 0;
    for (unsigned i = 0; i < trials; ++i) k += bernoulli(p) ? 1u : 0u;
    return k;
  }

 private:
  std::uint64_t base_;
  std::uint64_t counter_ = 0;
};

}  // namespace gencert
