#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

namespace tssort {

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Stream derivation for parallel trials: trial k works on derive_seed(base, k)
// so results do not depend on scheduling.
inline uint64_t derive_seed(uint64_t base, uint64_t stream) {
  return splitmix64(splitmix64(base) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

// mt19937_64 with hand-rolled distributions. The engine sequence is fixed by
// the standard and the distributions below are explicit, so a given seed
// yields the same stream on every platform and standard library.
class Rng {
public:
  explicit Rng(uint64_t seed) : gen_(splitmix64(seed)) {}

  static Rng derived(uint64_t base, uint64_t stream) { return Rng(derive_seed(base, stream)); }

  uint64_t next_u64() { return gen_(); }

  // [0, 1)
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  bool bernoulli(double p) { return uniform01() < p; }

  // Uniform over [-hi, -lo] ∪ [lo, hi]: magnitude first, then sign.
  double two_sided_uniform(double lo, double hi) {
    double magnitude = uniform(lo, hi);
    return bernoulli(0.5) ? magnitude : -magnitude;
  }

  // Standard normal via Box-Muller; the second value of each pair is cached.
  double gauss() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    constexpr double two_pi = 6.283185307179586476925286766559;
    double u1 = 1.0 - uniform01();  // (0, 1]
    double u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    cached_ = r * std::sin(two_pi * u2);
    has_cached_ = true;
    return r * std::cos(two_pi * u2);
  }

  // Unbiased integer in [0, n), n >= 1.
  uint64_t below(uint64_t n) {
    uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    for (;;) {
      uint64_t v = next_u64();
      if (v < limit) return v % n;
    }
  }

  std::vector<int> permutation(int n) {
    std::vector<int> p(static_cast<size_t>(n));
    std::iota(p.begin(), p.end(), 0);
    for (int i = n - 1; i > 0; --i) {
      uint64_t j = below(static_cast<uint64_t>(i) + 1);
      std::swap(p[static_cast<size_t>(i)], p[j]);
    }
    return p;
  }

private:
  std::mt19937_64 gen_;
  bool has_cached_ = false;
  double cached_ = 0.0;
};

}  // namespace tssort
