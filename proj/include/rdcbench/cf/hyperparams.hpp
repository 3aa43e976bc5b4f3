#pragma once

// The seven collaborative-filtering predictors and their hyperparameter
// bundle. Defaults are transcribed from the Surprise library's documented
// defaults (see README, "Hyperparameter defaults") so results line up with
// the most common Python tooling.

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "rdcbench/util.hpp"

namespace rdc {

enum class AlgorithmId : std::uint8_t {
  svd = 0,
  svd_b,
  nmf,
  slope_one,
  co_clustering,
  unn,
  inn,
};

inline constexpr std::array<AlgorithmId, 7> kAllAlgorithms = {
    AlgorithmId::svd,       AlgorithmId::svd_b, AlgorithmId::nmf, AlgorithmId::slope_one,
    AlgorithmId::co_clustering, AlgorithmId::unn,   AlgorithmId::inn,
};

inline constexpr std::size_t algorithm_ordinal(AlgorithmId id) {
  return static_cast<std::size_t>(id);
}

// Stable machine-facing name (config files, JSON records, CLI flags).
inline const char* algorithm_name(AlgorithmId id) {
  switch (id) {
    case AlgorithmId::svd: return "svd";
    case AlgorithmId::svd_b: return "svd_b";
    case AlgorithmId::nmf: return "nmf";
    case AlgorithmId::slope_one: return "slope_one";
    case AlgorithmId::co_clustering: return "co_clustering";
    case AlgorithmId::unn: return "unn";
    case AlgorithmId::inn: return "inn";
  }
  return "?";
}

// Report-facing name.
inline const char* algorithm_display_name(AlgorithmId id) {
  switch (id) {
    case AlgorithmId::svd: return "SVD";
    case AlgorithmId::svd_b: return "SVD_b";
    case AlgorithmId::nmf: return "NMF";
    case AlgorithmId::slope_one: return "Slope-One";
    case AlgorithmId::co_clustering: return "CoClustering";
    case AlgorithmId::unn: return "UNN";
    case AlgorithmId::inn: return "INN";
  }
  return "?";
}

inline std::optional<AlgorithmId> parse_algorithm(std::string_view s) {
  const std::string t = str::lower(str::trim(s));
  for (AlgorithmId id : kAllAlgorithms)
    if (t == algorithm_name(id)) return id;
  return std::nullopt;
}

enum class Similarity : std::uint8_t { msd = 0, cosine, pearson };

inline const char* similarity_name(Similarity s) {
  switch (s) {
    case Similarity::msd: return "msd";
    case Similarity::cosine: return "cosine";
    case Similarity::pearson: return "pearson";
  }
  return "?";
}

inline std::optional<Similarity> parse_similarity(std::string_view s) {
  const std::string t = str::lower(str::trim(s));
  if (t == "msd") return Similarity::msd;
  if (t == "cosine") return Similarity::cosine;
  if (t == "pearson") return Similarity::pearson;
  return std::nullopt;
}

struct Hyperparams {
  // factorization (svd, svd_b, nmf)
  std::uint32_t n_factors = 100;
  std::uint32_t n_epochs = 20;
  double learning_rate = 0.005;
  double regularization = 0.02;
  double init_std = 0.1;   // svd/svd_b factor init, N(0, init_std)
  double init_low = 0.0;   // nmf factor init, uniform in (init_low, init_high]
  double init_high = 1.0;
  std::uint64_t rng_seed = 0;

  // nearest neighbors (unn, inn)
  std::uint32_t k = 40;
  std::uint32_t min_k = 1;
  Similarity similarity = Similarity::msd;
  bool user_based = true;

  // co-clustering
  std::uint32_t n_user_clusters = 3;
  std::uint32_t n_item_clusters = 3;
};

inline Hyperparams default_hyperparams(AlgorithmId id) {
  Hyperparams p;
  switch (id) {
    case AlgorithmId::svd:
    case AlgorithmId::svd_b:
      p.n_factors = 100;
      p.n_epochs = 20;
      p.learning_rate = 0.005;
      p.regularization = 0.02;
      p.init_std = 0.1;
      break;
    case AlgorithmId::nmf:
      p.n_factors = 15;
      p.n_epochs = 50;
      p.regularization = 0.06;
      p.init_low = 0.0;
      p.init_high = 1.0;
      break;
    case AlgorithmId::slope_one:
      break;
    case AlgorithmId::co_clustering:
      p.n_user_clusters = 3;
      p.n_item_clusters = 3;
      p.n_epochs = 20;
      break;
    case AlgorithmId::unn:
      p.k = 40;
      p.min_k = 1;
      p.similarity = Similarity::msd;
      p.user_based = true;
      break;
    case AlgorithmId::inn:
      p.k = 40;
      p.min_k = 1;
      p.similarity = Similarity::msd;
      p.user_based = false;
      break;
  }
  return p;
}

inline void validate_hyperparams(AlgorithmId id, const Hyperparams& p) {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("hyperparams: ") + what);
  };
  switch (id) {
    case AlgorithmId::svd:
    case AlgorithmId::svd_b:
      require(p.n_factors >= 1, "n_factors must be >= 1");
      require(p.n_epochs >= 1, "n_epochs must be >= 1");
      require(p.learning_rate > 0, "learning_rate must be > 0");
      require(p.regularization >= 0, "regularization must be >= 0");
      require(p.init_std >= 0, "init_std must be >= 0");
      break;
    case AlgorithmId::nmf:
      require(p.n_factors >= 1, "n_factors must be >= 1");
      require(p.n_epochs >= 1, "n_epochs must be >= 1");
      require(p.regularization >= 0, "regularization must be >= 0");
      require(p.init_low >= 0, "init_low must be >= 0");
      require(p.init_high > p.init_low, "init_high must be > init_low");
      break;
    case AlgorithmId::slope_one:
      break;
    case AlgorithmId::co_clustering:
      require(p.n_user_clusters >= 1, "n_user_clusters must be >= 1");
      require(p.n_item_clusters >= 1, "n_item_clusters must be >= 1");
      require(p.n_epochs >= 1, "n_epochs must be >= 1");
      break;
    case AlgorithmId::unn:
    case AlgorithmId::inn:
      require(p.k >= 1, "k must be >= 1");
      require(p.min_k >= 1, "min_k must be >= 1");
      break;
  }
}

}  // namespace rdc
