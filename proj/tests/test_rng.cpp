#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <set>
#include <vector>

#include "rdcbench/rng.hpp"

namespace {

// Independent transcriptions of the published reference generators, kept
// separate from the library implementation on purpose.

struct RefSplitmix64 {
  std::uint64_t x;
  std::uint64_t next() {
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
};

struct RefXoshiro256ss {
  std::uint64_t s[4];
  explicit RefXoshiro256ss(std::uint64_t seed) {
    RefSplitmix64 sm{seed};
    for (auto& w : s) w = sm.next();
  }
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t next() {
    const std::uint64_t result = rotl(s[1] * 5, 7) * 9;
    const std::uint64_t t = s[1] << 17;
    s[2] ^= s[0];
    s[3] ^= s[1];
    s[1] ^= s[2];
    s[0] ^= s[3];
    s[2] ^= t;
    s[3] = rotl(s[3], 45);
    return result;
  }
};

}  // namespace

TEST_CASE("splitmix64 matches the reference transcription") {
  for (std::uint64_t seed : {0ULL, 1ULL, 42ULL, 0xDEADBEEFCAFEULL}) {
    std::uint64_t state = seed;
    RefSplitmix64 ref{seed};
    for (int i = 0; i < 1000; ++i) REQUIRE(rdc::splitmix64_next(state) == ref.next());
  }
}

TEST_CASE("xoshiro256** matches the reference transcription") {
  for (std::uint64_t seed : {0ULL, 7ULL, 123456789ULL}) {
    rdc::Xoshiro256ss rng(seed);
    RefXoshiro256ss ref(seed);
    for (int i = 0; i < 1000; ++i) REQUIRE(rng.next() == ref.next());
  }
}

TEST_CASE("mix_seed is the k+1-th splitmix64 output of the master stream") {
  for (std::uint64_t master : {0ULL, 99ULL, 0xABCDEF0102ULL}) {
    RefSplitmix64 ref{master};
    for (std::uint64_t k = 0; k < 64; ++k) REQUIRE(rdc::mix_seed(master, k) == ref.next());
  }
}

TEST_CASE("bounded draws stay in range and cover all values") {
  rdc::Xoshiro256ss rng(11);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 2000; ++i) {
    std::uint64_t v = rng.below(10);
    REQUIRE(v < 10);
    seen.insert(v);
  }
  REQUIRE(seen.size() == 10);

  for (int i = 0; i < 200; ++i) {
    auto v = rng.uniform_int(-3, 3);
    REQUIRE(v >= -3);
    REQUIRE(v <= 3);
  }
}

TEST_CASE("unit_double lies in [0,1) with plausible mean") {
  rdc::Xoshiro256ss rng(5);
  double sum = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    double v = rng.unit_double();
    REQUIRE(v >= 0.0);
    REQUIRE(v < 1.0);
    sum += v;
  }
  REQUIRE(std::abs(sum / n - 0.5) < 0.01);
}

TEST_CASE("normal draws have plausible moments") {
  rdc::Xoshiro256ss rng(17);
  const int n = 40000;
  double sum = 0, sq = 0;
  for (int i = 0; i < n; ++i) {
    double v = rng.normal(0.0, 1.0);
    sum += v;
    sq += v * v;
  }
  double mean = sum / n;
  double var = sq / n - mean * mean;
  REQUIRE(std::abs(mean) < 0.02);
  REQUIRE(std::abs(var - 1.0) < 0.03);
}

TEST_CASE("shuffle yields a permutation, deterministic per seed") {
  std::vector<int> v(100);
  std::iota(v.begin(), v.end(), 0);
  rdc::Xoshiro256ss rng(3);
  rng.shuffle(v);

  std::vector<int> v2(100);
  std::iota(v2.begin(), v2.end(), 0);
  rdc::Xoshiro256ss rng2(3);
  rng2.shuffle(v2);
  REQUIRE(v == v2);

  std::sort(v.begin(), v.end());
  for (int i = 0; i < 100; ++i) REQUIRE(v[i] == i);
}

TEST_CASE("sample_indices returns k distinct in-range indices") {
  rdc::Xoshiro256ss rng(29);
  auto picks = rng.sample_indices(50, 20);
  REQUIRE(picks.size() == 20);
  std::set<std::uint32_t> uniq(picks.begin(), picks.end());
  REQUIRE(uniq.size() == 20);
  for (auto p : picks) REQUIRE(p < 50);

  rdc::Xoshiro256ss rng2(29);
  REQUIRE(rng2.sample_indices(50, 20) == picks);

  rdc::Xoshiro256ss rng3(30);
  auto all = rng3.sample_indices(10, 10);
  std::sort(all.begin(), all.end());
  for (std::uint32_t i = 0; i < 10; ++i) REQUIRE(all[i] == i);
}
