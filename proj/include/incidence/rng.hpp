#pragma once

// Counter-based random stream. Each output is a strong 64-bit mix of
// (key, counter), so a stream is fully determined by its key and position;
// substream(seed, t) keys an independent stream per trial, which makes
// parallel runs reproducible under any scheduling.

#include <cstdint>

#include "exact.hpp"

namespace incidence {

class counter_rng {
 public:
  explicit counter_rng(std::uint64_t key) : key_(key) {}

  // Independent stream for trial `t` of a run seeded with `seed`.
  static counter_rng substream(std::uint64_t seed, std::uint64_t t) {
    return counter_rng(mix(seed + 0x9E3779B97F4A7C15ull * (t + 1)));
  }

  std::uint64_t next() {
    counter_ += 0x9E3779B97F4A7C15ull;
    return mix(key_ ^ counter_);
  }

  // Uniform in [0, m) without modulo bias (rejection above the largest
  // multiple of m).
  std::uint64_t below(std::uint64_t m) {
    const std::uint64_t threshold = -m % m;  // 2^64 mod m
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % m;
    }
  }

  // Uniform exact integer in [0, bound): draw ceil(log2 bound) bits, reject
  // values >= bound.
  Nat nat_below(const Nat& bound) {
    if (bound <= 0) throw std::invalid_argument("nat_below: bound must be > 0");
    if (bound == 1) return 0;
    const std::size_t bits = boost::multiprecision::msb(bound) + 1;
    const std::size_t words = (bits + 63) / 64;
    const std::size_t top_bits = bits - 64 * (words - 1);
    const std::uint64_t top_mask =
        top_bits == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << top_bits) - 1);
    for (;;) {
      Nat r = next() & top_mask;
      for (std::size_t w = 1; w < words; ++w) r = (r << 64) | next();
      if (r < bound) return r;
    }
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace incidence
