#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <tuple>

#include "rdcbench/rating_matrix.hpp"
#include "rdcbench/rng.hpp"

using rdc::Rating;
using rdc::RatingMatrix;
using rdc::RatingScale;

namespace {

RatingMatrix small_matrix() {
  // 3 users, 4 items
  std::vector<Rating> t = {
      {0, 0, 5}, {0, 2, 3}, {1, 0, 4}, {1, 1, 2}, {1, 3, 1}, {2, 2, 5},
  };
  return RatingMatrix(3, 4, t, RatingScale::movielens_1m(), "unit");
}

}  // namespace

TEST_CASE("rating scale validation") {
  REQUIRE_NOTHROW((RatingScale{1, 5, 1}).validate());
  REQUIRE_NOTHROW((RatingScale{0.5, 5, 0.5}).validate());
  REQUIRE_THROWS_AS((RatingScale{5, 1, 1}).validate(), rdc::Error);
  REQUIRE_THROWS_AS((RatingScale{1, 5, 0}).validate(), rdc::Error);
  REQUIRE_THROWS_AS((RatingScale{1, 5, 0.3}).validate(), rdc::Error);
}

TEST_CASE("construction and accessors") {
  RatingMatrix m = small_matrix();
  REQUIRE(m.m() == 3);
  REQUIRE(m.n() == 4);
  REQUIRE(m.n_ratings() == 6);
  REQUIRE(m.user_degree(0) == 2);
  REQUIRE(m.user_degree(1) == 3);
  REQUIRE(m.item_degree(0) == 2);
  REQUIRE(m.item_degree(1) == 1);
  REQUIRE(m.value_at(0, 0) == 5.0);
  REQUIRE(m.value_at(2, 2) == 5.0);
  REQUIRE_FALSE(m.value_at(2, 0).has_value());
  REQUIRE(m.global_mean() == Catch::Approx((5 + 3 + 4 + 2 + 1 + 5) / 6.0));
  REQUIRE(m.is_compact());
}

TEST_CASE("row and column views contain the same triple set") {
  RatingMatrix m = small_matrix();
  std::set<std::tuple<std::uint32_t, std::uint32_t, double>> rows, cols;
  for (std::uint32_t u = 0; u < m.m(); ++u)
    for (const Rating& r : m.row(u)) {
      REQUIRE(r.user == u);
      rows.insert({r.user, r.item, r.value});
    }
  for (std::uint32_t i = 0; i < m.n(); ++i)
    m.for_each_in_col(i, [&](const Rating& r) {
      REQUIRE(r.item == i);
      cols.insert({r.user, r.item, r.value});
    });
  REQUIRE(rows == cols);
  REQUIRE(rows.size() == m.n_ratings());
}

TEST_CASE("construction rejects bad input") {
  RatingScale s = RatingScale::movielens_1m();
  REQUIRE_THROWS_WITH(RatingMatrix(0, 2, {{0, 0, 3}}, s), Catch::Matchers::ContainsSubstring("zero"));
  REQUIRE_THROWS_WITH(RatingMatrix(2, 2, {}, s), Catch::Matchers::ContainsSubstring("no ratings"));
  REQUIRE_THROWS_WITH(RatingMatrix(2, 2, {{2, 0, 3}}, s),
                      Catch::Matchers::ContainsSubstring("out of range"));
  REQUIRE_THROWS_WITH(RatingMatrix(2, 2, {{0, 2, 3}}, s),
                      Catch::Matchers::ContainsSubstring("out of range"));
  REQUIRE_THROWS_WITH(RatingMatrix(2, 2, {{0, 0, 9}}, s),
                      Catch::Matchers::ContainsSubstring("outside scale"));
  REQUIRE_THROWS_WITH(RatingMatrix(2, 2, {{0, 0, 3}, {0, 0, 4}}, s),
                      Catch::Matchers::ContainsSubstring("duplicate"));
}

TEST_CASE("a 10x20 matrix cannot hold 600 ratings") {
  // 600 triples in a 10x20 grid force duplicate pairs, which are rejected,
  // so n_ratings <= m*n holds for every constructed matrix.
  std::vector<Rating> t;
  for (int k = 0; k < 600; ++k)
    t.push_back({static_cast<std::uint32_t>(k % 10), static_cast<std::uint32_t>(k % 20), 3.0});
  REQUIRE_THROWS_AS(RatingMatrix(10, 20, t, RatingScale::movielens_1m()), rdc::Error);
}

TEST_CASE("rdc profile of a 10x20 matrix with 60 ratings") {
  std::vector<Rating> t;
  for (std::uint32_t u = 0; u < 10; ++u)
    for (std::uint32_t i = 0; i < 6; ++i) t.push_back({u, (u + i * 3) % 20, 4.0});
  RatingMatrix m(10, 20, t, RatingScale::movielens_1m());
  auto p = rdc::rdc_profile(m);
  REQUIRE(p.ipu == 6.0);
  REQUIRE(p.ipi == 3.0);
  REQUIRE(p.density == 0.30);
}

TEST_CASE("square matrices give ipu == ipi exactly") {
  std::vector<Rating> t;
  for (std::uint32_t u = 0; u < 100; ++u)
    for (std::uint32_t k = 0; k < 5; ++k) t.push_back({u, (u * 7 + k * 13) % 100, 3.0});
  RatingMatrix m(100, 100, t, RatingScale::movielens_1m());
  auto p = rdc::rdc_profile(m);
  REQUIRE(p.n_ratings == 500);
  REQUIRE(p.ipu == 5.0);
  REQUIRE(p.ipu == p.ipi);
}

TEST_CASE("ipu*m == ipi*n == n_ratings within 1e-12 on fuzzed matrices") {
  rdc::Xoshiro256ss rng(99);
  for (int rep = 0; rep < 50; ++rep) {
    auto m = static_cast<std::uint32_t>(rng.uniform_int(1, 40));
    auto n = static_cast<std::uint32_t>(rng.uniform_int(1, 40));
    std::set<std::pair<std::uint32_t, std::uint32_t>> cells;
    auto want = static_cast<std::size_t>(rng.uniform_int(1, m * n));
    while (cells.size() < want)
      cells.insert({static_cast<std::uint32_t>(rng.below(m)), static_cast<std::uint32_t>(rng.below(n))});
    std::vector<Rating> t;
    for (auto [u, i] : cells) t.push_back({u, i, static_cast<double>(rng.uniform_int(1, 5))});
    RatingMatrix mat(m, n, t, RatingScale::movielens_1m());
    auto p = rdc::rdc_profile(mat);
    auto nr = static_cast<double>(p.n_ratings);
    REQUIRE(std::abs(p.ipu * p.m - nr) <= 1e-12 * nr);
    REQUIRE(std::abs(p.ipi * p.n - nr) <= 1e-12 * nr);
    REQUIRE(p.density > 0.0);
    REQUIRE(p.density <= 1.0);
  }
}
