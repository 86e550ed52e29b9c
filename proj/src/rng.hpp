#pragma once

#include <cstdint>
#include <initializer_list>

namespace searchlab {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// splitmix64 finalizer; full-period, decent avalanche, cheap.
inline std::uint64_t mix64(std::uint64_t z) {
  z += kGolden;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Order-sensitive combine, used to derive child seeds from (seed, key...).
inline std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t v) {
  return mix64(seed ^ (v + kGolden + (seed << 6) + (seed >> 2)));
}

inline std::uint64_t derive_seed(std::uint64_t base,
                                 std::initializer_list<std::uint64_t> keys) {
  std::uint64_t s = mix64(base);
  for (std::uint64_t k : keys) s = hash_combine(s, k);
  return s;
}

// Named random stream. Streams are identified by their seed; split(key)
// yields an independent stream whose identity depends only on (seed, key),
// never on how many numbers were drawn, so seed derivation is stable across
// code paths. Generation itself is a splitmix64 counter walk.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : seed_(seed), ctr_(seed) {}

  std::uint64_t next_u64() { return mix64(ctr_ += kGolden); }

  // uniform in [0, 1)
  double next_double() { return (next_u64() >> 11) * 0x1.0p-53; }

  // uniform in [0, bound); bound must be >= 1
  int next_int(int bound) {
    return static_cast<int>(next_u64() % static_cast<std::uint64_t>(bound));
  }

  bool next_bernoulli(double p) { return next_double() < p; }

  RngStream split(std::uint64_t key) const {
    return RngStream(hash_combine(seed_, key));
  }

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::uint64_t ctr_;
};

}  // namespace searchlab
