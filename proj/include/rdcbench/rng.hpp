#pragma once

// Portable seeded randomness. Everything downstream (sampling, SGD shuffles,
// factor init, cluster init) draws from these fixed generators so that runs
// replicate across platforms and runs:
//
//   * splitmix64  (Vigna) — seed expansion and the seed-derivation hash.
//     Constants: 0x9E3779B97F4A7C15, 0xBF58476D1CE4E5B9, 0x94D049BB133111EB.
//   * xoshiro256** (Blackman/Vigna) — the working generator.
//
// mix_seed(master, k) is the (k+1)-th output of splitmix64 seeded with
// `master`; it is the derivation used for per-sample, per-split and per-fit
// seeds. Distribution helpers (bounded ints, doubles, normals, shuffles) are
// implemented here rather than with <random> because the standard
// distributions are not bit-portable across library implementations.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace rdc {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Derive a child seed: the (k+1)-th splitmix64 output of the `master` stream.
inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t k) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (k + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class Xoshiro256ss {
 public:
  explicit Xoshiro256ss(std::uint64_t seed) {
    std::uint64_t st = seed;
    for (auto& word : state_) word = splitmix64_next(st);
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Unbiased integer in [0, n) by rejection.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t threshold = (-n) % n;  // 2^64 mod n
    std::uint64_t r;
    do {
      r = next();
    } while (r < threshold);
    return r % n;
  }

  // Inclusive integer range.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  // Double in [0, 1), 53 random bits.
  double unit_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit_double(); }

  // Box-Muller; one normal per call, no state carried between calls.
  double normal(double mean, double stddev) {
    const double u1 = 1.0 - unit_double();  // (0, 1]
    const double u2 = unit_double();
    const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    return mean + stddev * z;
  }

  // Fisher-Yates, fixed iteration order.
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  // k distinct indices from [0, n), by partial Fisher-Yates. Order is the
  // draw order; callers that need a canonical order sort the result.
  std::vector<std::uint32_t> sample_indices(std::uint32_t n, std::uint32_t k) {
    std::vector<std::uint32_t> pool(n);
    for (std::uint32_t i = 0; i < n; ++i) pool[i] = i;
    for (std::uint32_t i = 0; i < k; ++i) {
      std::uint32_t j = i + static_cast<std::uint32_t>(below(n - i));
      std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    return pool;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::array<std::uint64_t, 4> state_;
};

}  // namespace rdc
