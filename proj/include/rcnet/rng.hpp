#pragma once

// Seeding and uniform sampling. All stochastic code in this project draws
// from mt19937_64 seeded through splitmix64, so every result is reproducible
// from a single u64 seed. Child streams are derived by hashing the parent
// seed with integer tags (seed_chain), never by consuming parent output.

#include <cstdint>
#include <initializer_list>
#include <random>

namespace rcnet {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// H(base, tag1, tag2, ...): order-sensitive mix of a base seed with tags.
inline std::uint64_t seed_chain(std::uint64_t base,
                                std::initializer_list<std::uint64_t> tags) {
  std::uint64_t h = splitmix64(base);
  for (std::uint64_t t : tags) h = splitmix64(h ^ t);
  return h;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(splitmix64(seed)) {}

  std::uint64_t next_u64() { return eng_(); }

  // uniform in [0,1); 53-bit mantissa, platform independent
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // uniform in [lo,hi)
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * next_double();
  }

  // uniform integer in [0,n), rejection-free modulo bias removal
  std::uint64_t next_below(std::uint64_t n) {
    std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      std::uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace rcnet
