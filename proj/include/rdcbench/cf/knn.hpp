#pragma once

// User- and item-based nearest neighbors. Similarities are computed over
// co-rated entries only (zero co-ratings give similarity 0, so such pairs are
// never selected); the estimate is the similarity-weighted average of the
// top-k neighbors that rated the target, ties broken toward the lower index.
// The similarity matrix is dense over the "x" axis (users for UNN, items for
// INN), i.e. O(x^2) memory, like the reference tooling.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "rdcbench/cf/hyperparams.hpp"
#include "rdcbench/rating_matrix.hpp"

namespace rdc {

// similarity between x-axis entities a and b over their co-rated entries
inline std::vector<double> build_similarity(const RatingMatrix& train, bool user_based,
                                            Similarity kind) {
  const std::uint32_t xc = user_based ? train.m() : train.n();
  const std::uint32_t other = user_based ? train.n() : train.m();
  const std::size_t total = static_cast<std::size_t>(xc) * xc;

  std::vector<double> sim(total, 0.0);
  std::vector<std::uint32_t> freq(total, 0);

  // per-"other" entity list of (x index, rating), x ascending
  std::vector<std::pair<std::uint32_t, double>> entries;
  auto visit_other = [&](std::uint32_t o, auto&& fn) {
    entries.clear();
    if (user_based) {
      train.for_each_in_col(o, [&](const Rating& r) { entries.push_back({r.user, r.value}); });
    } else {
      for (const Rating& r : train.row(o)) entries.push_back({r.item, r.value});
    }
    fn();
  };

  switch (kind) {
    case Similarity::msd: {
      std::vector<double> sqdiff(total, 0.0);
      for (std::uint32_t o = 0; o < other; ++o)
        visit_other(o, [&] {
          for (std::size_t a = 0; a < entries.size(); ++a)
            for (std::size_t b = a + 1; b < entries.size(); ++b) {
              const std::size_t idx =
                  static_cast<std::size_t>(entries[a].first) * xc + entries[b].first;
              const double d = entries[a].second - entries[b].second;
              sqdiff[idx] += d * d;
              ++freq[idx];
            }
        });
      for (std::uint32_t a = 0; a < xc; ++a)
        for (std::uint32_t b = a + 1; b < xc; ++b) {
          const std::size_t ab = static_cast<std::size_t>(a) * xc + b;
          if (freq[ab] == 0) continue;
          const double s = 1.0 / (sqdiff[ab] / freq[ab] + 1.0);
          sim[ab] = s;
          sim[static_cast<std::size_t>(b) * xc + a] = s;
        }
      break;
    }
    case Similarity::cosine: {
      std::vector<double> prod(total, 0.0), sqa(total, 0.0), sqb(total, 0.0);
      for (std::uint32_t o = 0; o < other; ++o)
        visit_other(o, [&] {
          for (std::size_t a = 0; a < entries.size(); ++a)
            for (std::size_t b = a + 1; b < entries.size(); ++b) {
              const std::size_t idx =
                  static_cast<std::size_t>(entries[a].first) * xc + entries[b].first;
              prod[idx] += entries[a].second * entries[b].second;
              sqa[idx] += entries[a].second * entries[a].second;
              sqb[idx] += entries[b].second * entries[b].second;
              ++freq[idx];
            }
        });
      for (std::uint32_t a = 0; a < xc; ++a)
        for (std::uint32_t b = a + 1; b < xc; ++b) {
          const std::size_t ab = static_cast<std::size_t>(a) * xc + b;
          if (freq[ab] == 0 || sqa[ab] == 0.0 || sqb[ab] == 0.0) continue;
          const double s = prod[ab] / (std::sqrt(sqa[ab]) * std::sqrt(sqb[ab]));
          sim[ab] = s;
          sim[static_cast<std::size_t>(b) * xc + a] = s;
        }
      break;
    }
    case Similarity::pearson: {
      std::vector<double> sa(total, 0.0), sb(total, 0.0), sab(total, 0.0), saa(total, 0.0),
          sbb(total, 0.0);
      for (std::uint32_t o = 0; o < other; ++o)
        visit_other(o, [&] {
          for (std::size_t a = 0; a < entries.size(); ++a)
            for (std::size_t b = a + 1; b < entries.size(); ++b) {
              const std::size_t idx =
                  static_cast<std::size_t>(entries[a].first) * xc + entries[b].first;
              sa[idx] += entries[a].second;
              sb[idx] += entries[b].second;
              sab[idx] += entries[a].second * entries[b].second;
              saa[idx] += entries[a].second * entries[a].second;
              sbb[idx] += entries[b].second * entries[b].second;
              ++freq[idx];
            }
        });
      for (std::uint32_t a = 0; a < xc; ++a)
        for (std::uint32_t b = a + 1; b < xc; ++b) {
          const std::size_t ab = static_cast<std::size_t>(a) * xc + b;
          if (freq[ab] == 0) continue;
          const double fn = freq[ab];
          const double num = sab[ab] - sa[ab] * sb[ab] / fn;
          const double den =
              std::sqrt((saa[ab] - sa[ab] * sa[ab] / fn) * (sbb[ab] - sb[ab] * sb[ab] / fn));
          if (den == 0.0) continue;
          const double s = num / den;
          sim[ab] = s;
          sim[static_cast<std::size_t>(b) * xc + a] = s;
        }
      break;
    }
  }
  for (std::uint32_t a = 0; a < xc; ++a) sim[static_cast<std::size_t>(a) * xc + a] = 1.0;
  return sim;
}

struct KnnModel {
  bool user_based = true;
  std::uint32_t k = 40;
  std::uint32_t min_k = 1;
  Similarity similarity = Similarity::msd;
  std::uint32_t x_count = 0;
  double mu = 0.0;
  std::vector<double> sim;  // x_count * x_count
  RatingMatrix train;       // neighbor ratings are looked up at predict time

  double sim_at(std::uint32_t a, std::uint32_t b) const {
    return sim[static_cast<std::size_t>(a) * x_count + b];
  }

  // Unclipped estimate; global-mean fallback when the user or item is
  // unknown or no neighbor with positive similarity rated the target.
  double estimate(std::uint64_t user, std::uint64_t item) const {
    const bool user_known = user < train.m() && train.user_degree(static_cast<std::uint32_t>(user)) > 0;
    const bool item_known = item < train.n() && train.item_degree(static_cast<std::uint32_t>(item)) > 0;
    if (!user_known || !item_known) return mu;
    const auto u = static_cast<std::uint32_t>(user);
    const auto i = static_cast<std::uint32_t>(item);
    const std::uint32_t x = user_based ? u : i;

    struct Cand {
      double sim;
      std::uint32_t idx;
      double rating;
    };
    std::vector<Cand> cands;
    if (user_based) {
      train.for_each_in_col(i, [&](const Rating& r) {
        if (r.user != u) cands.push_back({sim_at(x, r.user), r.user, r.value});
      });
    } else {
      for (const Rating& r : train.row(u))
        if (r.item != i) cands.push_back({sim_at(x, r.item), r.item, r.value});
    }

    auto better = [](const Cand& a, const Cand& b) {
      return a.sim != b.sim ? a.sim > b.sim : a.idx < b.idx;
    };
    if (cands.size() > k) {
      std::partial_sort(cands.begin(), cands.begin() + k, cands.end(), better);
      cands.resize(k);
    } else {
      std::sort(cands.begin(), cands.end(), better);
    }

    double sum_sim = 0.0, sum_sr = 0.0;
    std::uint32_t used = 0;
    for (const Cand& c : cands) {
      if (c.sim > 0.0) {
        sum_sim += c.sim;
        sum_sr += c.sim * c.rating;
        ++used;
      }
    }
    if (used < min_k || sum_sim == 0.0) return mu;
    return sum_sr / sum_sim;
  }
};

inline KnnModel fit_knn(const Hyperparams& params, const RatingMatrix& train) {
  validate_hyperparams(params.user_based ? AlgorithmId::unn : AlgorithmId::inn, params);
  KnnModel mdl{params.user_based,
               params.k,
               params.min_k,
               params.similarity,
               params.user_based ? train.m() : train.n(),
               train.global_mean(),
               build_similarity(train, params.user_based, params.similarity),
               train};
  return mdl;
}

}  // namespace rdc
