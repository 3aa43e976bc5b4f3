#pragma once

// Train/test splitting, RMSE and the performance measure 1/RMSE. A split
// keeps the parent index space in the train matrix (users/items can become
// train-cold; test triples stay addressable). RMSE sums in test order, which
// is the canonical (user, item) order, so results replicate exactly.

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rdcbench/cf/model.hpp"
#include "rdcbench/rating_matrix.hpp"
#include "rdcbench/rng.hpp"
#include "rdcbench/util.hpp"

namespace rdc {

struct SplitSpec {
  double test_fraction = 0.2;
  std::uint64_t seed = 0;
};

struct SplitResult {
  RatingMatrix train;
  std::vector<Rating> test;  // sorted by (user, item)
};

struct EvalResult {
  AlgorithmId algorithm = AlgorithmId::svd;
  double rmse = 0.0;
  std::optional<double> performance;  // empty marks a perfect (rmse == 0) run
  std::uint64_t n_test = 0;
  std::uint64_t n_train = 0;
  double fit_seconds = 0.0;
  std::uint64_t split_seed = 0;
};

inline SplitResult split(const RatingMatrix& matrix, const SplitSpec& spec) {
  if (!(spec.test_fraction > 0.0) || !(spec.test_fraction < 1.0))
    throw std::invalid_argument("split: test_fraction must lie in (0, 1)");
  const std::uint64_t total = matrix.n_ratings();
  if (total < 2) throw Error("split: need at least 2 ratings");
  const auto n_test =
      static_cast<std::uint64_t>(std::llround(spec.test_fraction * static_cast<double>(total)));
  if (n_test >= total) throw Error("split: empty train");

  std::vector<std::uint64_t> order(total);
  for (std::uint64_t i = 0; i < total; ++i) order[i] = i;
  Xoshiro256ss rng(spec.seed);
  rng.shuffle(order);

  std::vector<std::uint8_t> in_test(total, 0);
  for (std::uint64_t i = 0; i < n_test; ++i) in_test[order[i]] = 1;

  const std::span<const Rating> triples = matrix.triples();
  std::vector<Rating> train_triples, test_triples;
  train_triples.reserve(total - n_test);
  test_triples.reserve(n_test);
  for (std::uint64_t i = 0; i < total; ++i)
    (in_test[i] ? test_triples : train_triples).push_back(triples[i]);

  RatingMatrix train(matrix.m(), matrix.n(), std::move(train_triples), matrix.scale(),
                     matrix.source_id() + "#train");
  return {std::move(train), std::move(test_triples)};
}

inline double rmse(const TrainedModel& model, std::span<const Rating> test, bool clip = true) {
  if (test.empty()) throw Error("rmse: empty test set");
  double sum = 0.0;
  for (const Rating& r : test) {
    const double est = clip ? predict(model, r.user, r.item) : predict_raw(model, r.user, r.item);
    const double err = est - r.value;
    sum += err * err;
  }
  return std::sqrt(sum / static_cast<double>(test.size()));
}

// 1/RMSE; an exact fit gets the "perfect" marker (empty optional), which is
// excluded from regressions rather than mapped to infinity.
inline std::optional<double> performance(double rmse_value) {
  if (rmse_value < 0.0) throw std::invalid_argument("performance: rmse must be >= 0");
  if (rmse_value == 0.0) return std::nullopt;
  return 1.0 / rmse_value;
}

inline EvalResult evaluate(AlgorithmId algorithm, const Hyperparams& params,
                           const RatingMatrix& matrix, const SplitSpec& spec, bool clip = true) {
  SplitResult parts = split(matrix, spec);
  if (parts.test.empty()) throw Error("evaluate: empty test set (test_fraction too small)");

  const auto t0 = std::chrono::steady_clock::now();
  TrainedModel model = fit(algorithm, params, parts.train);
  const auto t1 = std::chrono::steady_clock::now();

  EvalResult out;
  out.algorithm = algorithm;
  out.rmse = rmse(model, parts.test, clip);
  out.performance = performance(out.rmse);
  out.n_test = parts.test.size();
  out.n_train = parts.train.n_ratings();
  out.fit_seconds = std::chrono::duration<double>(t1 - t0).count();
  out.split_seed = spec.seed;
  return out;
}

}  // namespace rdc
