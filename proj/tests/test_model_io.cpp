#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "rdcbench/cf/serialize.hpp"
#include "support/fuzz.hpp"

using rdc::AlgorithmId;

TEST_CASE("trained models round-trip through the cache format") {
  rdc::Xoshiro256ss rng(9001);
  rdc::RatingMatrix train = fuzz::random_matrix(rng, 8, 8, 0.5);

  for (AlgorithmId id : rdc::kAllAlgorithms) {
    rdc::Hyperparams p = rdc::default_hyperparams(id);
    p.n_factors = 4;
    p.n_epochs = 3;
    p.rng_seed = 77;
    auto model = rdc::fit(id, p, train);

    std::stringstream buf;
    rdc::save_model(model, buf);
    auto back = rdc::load_model(buf);

    REQUIRE(back.algorithm == model.algorithm);
    REQUIRE(back.global_mean == model.global_mean);
    for (std::uint32_t u = 0; u <= train.m() + 1; ++u)
      for (std::uint32_t i = 0; i <= train.n() + 1; ++i) {
        INFO(rdc::algorithm_name(id) << " u=" << u << " i=" << i);
        REQUIRE(rdc::predict_raw(back, u, i) == rdc::predict_raw(model, u, i));
      }
  }
}

TEST_CASE("model loader rejects corrupt input") {
  std::stringstream bad("not a model");
  REQUIRE_THROWS_WITH(rdc::load_model(bad), Catch::Matchers::ContainsSubstring("magic"));

  rdc::Xoshiro256ss rng(12);
  rdc::RatingMatrix train = fuzz::random_matrix(rng, 4, 4, 0.7);
  auto model = rdc::fit(AlgorithmId::slope_one, {}, train);
  std::stringstream buf;
  rdc::save_model(model, buf);
  std::string blob = buf.str();
  std::stringstream truncated(blob.substr(0, blob.size() / 2));
  REQUIRE_THROWS_WITH(rdc::load_model(truncated), Catch::Matchers::ContainsSubstring("truncated"));
}
