#pragma once

// Uniform fit/predict surface over the seven predictors, the cold-start
// fallback ladder, and opaque model (de)serialization for caching.
//
// Fallback ladder for predict: full model estimate when the model covers the
// pair; otherwise mu plus whichever of the user/item offsets the model still
// has (bias terms or training means); otherwise the training global mean.
// predict() clips to the training scale, predict_raw() does not.

#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <variant>

#include "rdcbench/cf/co_clustering.hpp"
#include "rdcbench/cf/factorization.hpp"
#include "rdcbench/cf/hyperparams.hpp"
#include "rdcbench/cf/knn.hpp"
#include "rdcbench/cf/slope_one.hpp"
#include "rdcbench/rating_matrix.hpp"

namespace rdc {

struct TrainedModel {
  AlgorithmId algorithm;
  RatingScale scale;
  double global_mean = 0.0;
  std::variant<FactorModel, SlopeOneModel, CoClusteringModel, KnnModel> state;
};

inline TrainedModel fit(AlgorithmId algorithm, const Hyperparams& params,
                        const RatingMatrix& train) {
  TrainedModel out{algorithm, train.scale(), train.global_mean(), FactorModel{}};
  switch (algorithm) {
    case AlgorithmId::svd:
      out.state = fit_svd(params, train, false);
      break;
    case AlgorithmId::svd_b:
      out.state = fit_svd(params, train, true);
      break;
    case AlgorithmId::nmf:
      out.state = fit_nmf(params, train);
      break;
    case AlgorithmId::slope_one:
      out.state = fit_slope_one(train);
      break;
    case AlgorithmId::co_clustering:
      out.state = fit_co_clustering(params, train);
      break;
    case AlgorithmId::unn:
    case AlgorithmId::inn: {
      Hyperparams p = params;
      p.user_based = algorithm == AlgorithmId::unn;
      out.state = fit_knn(p, train);
      break;
    }
  }
  return out;
}

namespace detail {

inline double factor_estimate(const FactorModel& mdl, double mu, std::uint64_t user,
                              std::uint64_t item) {
  const bool uk = user < mdl.m && mdl.known_user[user];
  const bool ik = item < mdl.n && mdl.known_item[item];
  if (!mdl.biased) {
    if (uk && ik)
      return mdl.dot(static_cast<std::uint32_t>(user), static_cast<std::uint32_t>(item));
    return mu;
  }
  double est = mu;
  if (uk) est += mdl.bu[user];
  if (ik) est += mdl.bi[item];
  if (uk && ik)
    est += mdl.dot(static_cast<std::uint32_t>(user), static_cast<std::uint32_t>(item));
  return est;
}

}  // namespace detail

inline double predict_raw(const TrainedModel& model, std::uint64_t user, std::uint64_t item) {
  return std::visit(
      [&](const auto& state) -> double {
        using T = std::decay_t<decltype(state)>;
        if constexpr (std::is_same_v<T, FactorModel>) {
          return detail::factor_estimate(state, model.global_mean, user, item);
        } else {
          return state.estimate(user, item);
        }
      },
      model.state);
}

inline double clip_to_scale(double value, const RatingScale& scale) {
  if (value < scale.min_value) return scale.min_value;
  if (value > scale.max_value) return scale.max_value;
  return value;
}

inline double predict(const TrainedModel& model, std::uint64_t user, std::uint64_t item) {
  return clip_to_scale(predict_raw(model, user, item), model.scale);
}

}  // namespace rdc
