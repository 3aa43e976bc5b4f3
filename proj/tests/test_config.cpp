#include <catch2/catch_amalgamated.hpp>

#include "rdcbench/config.hpp"
#include "rdcbench/experiment.hpp"

using rdc::KeyValueConfig;

TEST_CASE("key-value parsing") {
  auto cfg = KeyValueConfig::parse(
      "# a comment\n"
      "\n"
      "alpha = 1\n"
      "beta.gamma = hello world \n"
      "flag = true\n"
      "list = a, b , c\n");
  REQUIRE(cfg.get_u64("alpha") == 1);
  REQUIRE(cfg.get_string("beta.gamma") == "hello world");
  REQUIRE(cfg.get_bool("flag") == true);
  REQUIRE(cfg.get_list("list") == std::vector<std::string>{"a", "b", "c"});
  REQUIRE_FALSE(cfg.get_string("missing").has_value());
  REQUIRE_NOTHROW(cfg.reject_unused());
}

TEST_CASE("parsing rejects malformed input") {
  REQUIRE_THROWS_WITH(KeyValueConfig::parse("novalue\n"),
                      Catch::Matchers::ContainsSubstring("line 1"));
  REQUIRE_THROWS_WITH(KeyValueConfig::parse("a = 1\na = 2\n"),
                      Catch::Matchers::ContainsSubstring("duplicate"));
  REQUIRE_THROWS_WITH(KeyValueConfig::parse("BadKey = 1\n"),
                      Catch::Matchers::ContainsSubstring("bad key"));
  auto cfg = KeyValueConfig::parse("x = notanumber\n");
  REQUIRE_THROWS_WITH(cfg.get_u64("x"), Catch::Matchers::ContainsSubstring("expected"));
}

TEST_CASE("unused keys are rejected") {
  auto cfg = KeyValueConfig::parse("known = 1\nmystery = 2\n");
  REQUIRE(cfg.get_u64("known") == 1);
  REQUIRE_THROWS_WITH(cfg.reject_unused(), Catch::Matchers::ContainsSubstring("mystery"));
}

TEST_CASE("flag overrides replace file values") {
  auto cfg = KeyValueConfig::parse("samples = 5\n");
  cfg.set("samples", "9");
  cfg.set("extra", "1");
  REQUIRE(cfg.get_u64("samples") == 9);
  REQUIRE(cfg.get_u64("extra") == 1);
}

TEST_CASE("canonical form sorts keys") {
  auto a = KeyValueConfig::parse("b = 2\na = 1\n");
  auto b = KeyValueConfig::parse("a = 1\nb = 2\n");
  REQUIRE(a.canonical() == b.canonical());
  REQUIRE(a.canonical() == "a=1\nb=2\n");
}

TEST_CASE("experiment config parsing and hashing") {
  const std::string text =
      "dataset = data.triples\n"
      "format = triples\n"
      "samples = 4\n"
      "m_min = 10\nm_max = 20\nn_min = 10\nn_max = 20\n"
      "master_seed = 7\n"
      "test_fraction = 0.25\n"
      "split_seed = 3\n"
      "algorithms = svd,slope_one\n"
      "svd.n_factors = 8\n"
      "svd.n_epochs = 4\n"
      "log_base = base10\n"
      "out_dir = out\n"
      "workers = 2\n";
  auto kv = KeyValueConfig::parse(text);
  auto cfg = rdc::parse_experiment_config(kv);
  REQUIRE(cfg.format == rdc::DatasetFormat::triples);
  REQUIRE(cfg.plan.n_samples == 4);
  REQUIRE(cfg.plan.m_max == 20);
  REQUIRE(cfg.test_fraction == 0.25);
  REQUIRE(cfg.algorithms ==
          std::vector<rdc::AlgorithmId>{rdc::AlgorithmId::svd, rdc::AlgorithmId::slope_one});
  REQUIRE(cfg.hyperparams.at(rdc::AlgorithmId::svd).n_factors == 8);
  REQUIRE(cfg.hyperparams.at(rdc::AlgorithmId::svd).n_epochs == 4);
  REQUIRE(cfg.hyperparams.at(rdc::AlgorithmId::nmf).n_factors == 15);  // untouched default
  REQUIRE(cfg.log_base == rdc::LogBase::base10);
  REQUIRE(cfg.workers == 2);

  // hash ignores output plumbing but tracks seeds
  auto kv2 = KeyValueConfig::parse(text);
  auto cfg2 = rdc::parse_experiment_config(kv2);
  cfg2.out_dir = "elsewhere";
  cfg2.workers = 8;
  REQUIRE(rdc::config_hash(cfg) == rdc::config_hash(cfg2));
  cfg2.plan.master_seed = 8;
  REQUIRE(rdc::config_hash(cfg) != rdc::config_hash(cfg2));
}

TEST_CASE("experiment config rejects unknown keys and bad values") {
  auto kv = KeyValueConfig::parse("dataset = d\nformat = triples\nsampels = 3\n");
  REQUIRE_THROWS_WITH(rdc::parse_experiment_config(kv),
                      Catch::Matchers::ContainsSubstring("sampels"));

  auto kv2 = KeyValueConfig::parse("dataset = d\nformat = netflix\n");
  REQUIRE_THROWS_WITH(rdc::parse_experiment_config(kv2),
                      Catch::Matchers::ContainsSubstring("format"));

  auto kv3 = KeyValueConfig::parse("dataset = d\nformat = triples\nalgorithms = svd,smurf\n");
  REQUIRE_THROWS_WITH(rdc::parse_experiment_config(kv3),
                      Catch::Matchers::ContainsSubstring("smurf"));

  auto kv4 = KeyValueConfig::parse("format = triples\n");
  REQUIRE_THROWS_WITH(rdc::parse_experiment_config(kv4),
                      Catch::Matchers::ContainsSubstring("dataset"));
}
