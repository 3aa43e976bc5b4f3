#include <catch2/catch_amalgamated.hpp>

#include "rdcbench/cf/model.hpp"
#include "support/fuzz.hpp"

using rdc::AlgorithmId;
using rdc::Hyperparams;
using rdc::Rating;
using rdc::RatingMatrix;
using rdc::RatingScale;

TEST_CASE("training SSE is non-increasing across epochs") {
  rdc::Xoshiro256ss rng(1212);
  for (int rep = 0; rep < 30; ++rep) {
    RatingMatrix train = fuzz::random_matrix(rng, 12, 12, 0.45);
    Hyperparams p = rdc::default_hyperparams(AlgorithmId::co_clustering);
    p.rng_seed = static_cast<std::uint64_t>(rep);
    auto mdl = rdc::fit_co_clustering(p, train);
    REQUIRE(!mdl.sse_per_epoch.empty());
    for (std::size_t e = 1; e < mdl.sse_per_epoch.size(); ++e) {
      INFO("rep " << rep << " epoch " << e);
      REQUIRE(mdl.sse_per_epoch[e] <= mdl.sse_per_epoch[e - 1]);
    }
  }
}

TEST_CASE("cluster indices stay within bounds") {
  rdc::Xoshiro256ss rng(77);
  RatingMatrix train = fuzz::random_matrix(rng, 10, 10, 0.5);
  Hyperparams p = rdc::default_hyperparams(AlgorithmId::co_clustering);
  p.n_user_clusters = 4;
  p.n_item_clusters = 2;
  auto mdl = rdc::fit_co_clustering(p, train);
  for (auto g : mdl.user_cluster) REQUIRE(g < 4);
  for (auto h : mdl.item_cluster) REQUIRE(h < 2);
}

TEST_CASE("co-clustering recovers planted block structure") {
  // two user groups x two item groups with distinct means
  std::vector<Rating> t;
  for (std::uint32_t u = 0; u < 10; ++u)
    for (std::uint32_t i = 0; i < 10; ++i) {
      const bool ug = u < 5, ig = i < 5;
      const double v = (ug == ig) ? 5.0 : 1.0;
      t.push_back({u, i, v});
    }
  RatingMatrix train(10, 10, t, RatingScale::movielens_1m());
  Hyperparams p = rdc::default_hyperparams(AlgorithmId::co_clustering);
  p.n_user_clusters = 2;
  p.n_item_clusters = 2;
  p.rng_seed = 5;
  auto mdl = rdc::fit_co_clustering(p, train);
  REQUIRE(mdl.sse_per_epoch.back() < 1e-12);
  for (std::uint32_t u = 0; u < 10; ++u)
    for (std::uint32_t i = 0; i < 10; ++i)
      REQUIRE(mdl.estimate(u, i) == Catch::Approx((u < 5) == (i < 5) ? 5.0 : 1.0).margin(1e-9));
}

TEST_CASE("deterministic in the seed") {
  rdc::Xoshiro256ss rng(3131);
  RatingMatrix train = fuzz::random_matrix(rng, 9, 9, 0.5);
  Hyperparams p = rdc::default_hyperparams(AlgorithmId::co_clustering);
  p.rng_seed = 42;
  auto a = rdc::fit_co_clustering(p, train);
  auto b = rdc::fit_co_clustering(p, train);
  REQUIRE(a.user_cluster == b.user_cluster);
  REQUIRE(a.item_cluster == b.item_cluster);
  REQUIRE(a.sse_per_epoch == b.sse_per_epoch);
}

TEST_CASE("partial fallbacks use user and item means") {
  // user 2 and item 2 are train-cold
  RatingMatrix train(3, 3, {{0, 0, 5}, {0, 1, 3}, {1, 0, 1}, {1, 1, 2}},
                     RatingScale::movielens_1m());
  auto model = rdc::fit(AlgorithmId::co_clustering,
                        rdc::default_hyperparams(AlgorithmId::co_clustering), train);
  const auto& s = std::get<rdc::CoClusteringModel>(model.state);
  REQUIRE(rdc::predict_raw(model, 0, 2) == s.user_mean[0]);
  REQUIRE(rdc::predict_raw(model, 2, 1) == s.item_mean[1]);
  REQUIRE(rdc::predict_raw(model, 2, 2) == train.global_mean());
  REQUIRE(rdc::predict_raw(model, 7, 9) == train.global_mean());
}

TEST_CASE("more clusters than distinct users still trains") {
  RatingMatrix train(2, 3, {{0, 0, 5}, {0, 1, 4}, {1, 1, 1}, {1, 2, 2}},
                     RatingScale::movielens_1m());
  Hyperparams p = rdc::default_hyperparams(AlgorithmId::co_clustering);
  p.n_user_clusters = 5;
  p.n_item_clusters = 5;
  auto mdl = rdc::fit_co_clustering(p, train);
  for (auto g : mdl.user_cluster) REQUIRE(g < 5);
  for (std::size_t e = 1; e < mdl.sse_per_epoch.size(); ++e)
    REQUIRE(mdl.sse_per_epoch[e] <= mdl.sse_per_epoch[e - 1]);
}
