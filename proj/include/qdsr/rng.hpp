#pragma once

#include <cstdint>
#include <string>

namespace qdsr {

// SplitMix64. Deterministic across platforms; each verification check gets
// its own stream seeded from the suite seed and the check id so that check
// order never affects sampled points.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  // Uniform in [0, n).
  uint64_t below(uint64_t n) { return next() % n; }
  // Uniform in [lo, hi] inclusive.
  long range(long lo, long hi) {
    return lo + static_cast<long>(below(static_cast<uint64_t>(hi - lo + 1)));
  }
  // Small nonzero integer in [-m, m] \ {0}.
  long nonzero(long m) {
    long v = range(1, m);
    return (next() & 1) ? v : -v;
  }

  static uint64_t fnv1a64(const std::string& s) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    return h;
  }
  static Rng for_check(uint64_t seed, const std::string& check_id) {
    return Rng(seed ^ fnv1a64(check_id));
  }

 private:
  uint64_t state_;
};

}  // namespace qdsr
