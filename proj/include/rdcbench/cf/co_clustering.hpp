#pragma once

// Co-clustering of users and items. Prediction and reassignment use the rule
//
//   est(u, i) = coclusterMean(g(u), h(i)) + (userMean(u) - userClusterMean(g(u)))
//                                         + (itemMean(i) - itemClusterMean(h(i)))
//
// Each epoch recomputes the cluster averages from the current assignments,
// reassigns every user to its squared-error-minimizing cluster, then every
// item (ties go to the lower cluster index), re-seeding any emptied cluster
// with the member whose current squared error is largest. The training SSE is
// evaluated at the end of the epoch; an epoch that would raise it is rolled
// back and training stops, so the recorded SSE trace is non-increasing.

#include <cstdint>
#include <limits>
#include <vector>

#include "rdcbench/cf/hyperparams.hpp"
#include "rdcbench/rating_matrix.hpp"
#include "rdcbench/rng.hpp"

namespace rdc {

struct CoClusteringModel {
  std::uint32_t m = 0, n = 0;
  std::uint32_t n_user_clusters = 0, n_item_clusters = 0;
  double mu = 0.0;
  std::vector<double> user_mean, item_mean;  // mu where unknown
  std::vector<std::uint8_t> known_user, known_item;
  std::vector<std::uint32_t> user_cluster;  // m
  std::vector<std::uint32_t> item_cluster;  // n
  std::vector<double> avg_cocluster;        // G * H
  std::vector<double> avg_user_cluster;     // G
  std::vector<double> avg_item_cluster;     // H
  std::vector<double> sse_per_epoch;        // [0] is the initial assignment

  double cocluster(std::uint32_t g, std::uint32_t h) const {
    return avg_cocluster[static_cast<std::size_t>(g) * n_item_clusters + h];
  }

  // Unclipped estimate with partial fallbacks: unknown item -> user mean,
  // unknown user -> item mean, both unknown -> mu.
  double estimate(std::uint64_t user, std::uint64_t item) const {
    const bool uk = user < m && known_user[user];
    const bool ik = item < n && known_item[item];
    if (!uk && !ik) return mu;
    if (!ik) return user_mean[user];
    if (!uk) return item_mean[item];
    const auto u = static_cast<std::uint32_t>(user);
    const auto i = static_cast<std::uint32_t>(item);
    const std::uint32_t g = user_cluster[u], h = item_cluster[i];
    return cocluster(g, h) + (user_mean[u] - avg_user_cluster[g]) +
           (item_mean[i] - avg_item_cluster[h]);
  }
};

namespace detail {

inline void cocluster_averages(const RatingMatrix& train, CoClusteringModel& mdl) {
  const std::uint32_t G = mdl.n_user_clusters, H = mdl.n_item_clusters;
  std::vector<double> coc_sum(static_cast<std::size_t>(G) * H, 0.0);
  std::vector<std::uint64_t> coc_cnt(static_cast<std::size_t>(G) * H, 0);
  std::vector<double> g_sum(G, 0.0), h_sum(H, 0.0);
  std::vector<std::uint64_t> g_cnt(G, 0), h_cnt(H, 0);
  for (const Rating& t : train.triples()) {
    const std::uint32_t g = mdl.user_cluster[t.user], h = mdl.item_cluster[t.item];
    coc_sum[static_cast<std::size_t>(g) * H + h] += t.value;
    ++coc_cnt[static_cast<std::size_t>(g) * H + h];
    g_sum[g] += t.value;
    ++g_cnt[g];
    h_sum[h] += t.value;
    ++h_cnt[h];
  }
  mdl.avg_cocluster.resize(coc_sum.size());
  for (std::size_t x = 0; x < coc_sum.size(); ++x)
    mdl.avg_cocluster[x] = coc_cnt[x] ? coc_sum[x] / static_cast<double>(coc_cnt[x]) : mdl.mu;
  mdl.avg_user_cluster.resize(G);
  for (std::uint32_t g = 0; g < G; ++g)
    mdl.avg_user_cluster[g] = g_cnt[g] ? g_sum[g] / static_cast<double>(g_cnt[g]) : mdl.mu;
  mdl.avg_item_cluster.resize(H);
  for (std::uint32_t h = 0; h < H; ++h)
    mdl.avg_item_cluster[h] = h_cnt[h] ? h_sum[h] / static_cast<double>(h_cnt[h]) : mdl.mu;
}

inline double cocluster_sse(const RatingMatrix& train, const CoClusteringModel& mdl) {
  double sse = 0.0;
  for (const Rating& t : train.triples()) {
    const double err = t.value - mdl.estimate(t.user, t.item);
    sse += err * err;
  }
  return sse;
}

// squared error of one user's (or item's) ratings under a candidate cluster
inline double user_cost(const RatingMatrix& train, const CoClusteringModel& mdl, std::uint32_t u,
                        std::uint32_t g) {
  double cost = 0.0;
  const double base = mdl.user_mean[u] - mdl.avg_user_cluster[g];
  for (const Rating& t : train.row(u)) {
    const std::uint32_t h = mdl.item_cluster[t.item];
    const double est = mdl.cocluster(g, h) + base + (mdl.item_mean[t.item] - mdl.avg_item_cluster[h]);
    const double err = t.value - est;
    cost += err * err;
  }
  return cost;
}

inline double item_cost(const RatingMatrix& train, const CoClusteringModel& mdl, std::uint32_t i,
                        std::uint32_t h) {
  double cost = 0.0;
  const double base = mdl.item_mean[i] - mdl.avg_item_cluster[h];
  double sum = 0.0;
  train.for_each_in_col(i, [&](const Rating& t) {
    const std::uint32_t g = mdl.user_cluster[t.user];
    const double est = mdl.cocluster(g, h) + (mdl.user_mean[t.user] - mdl.avg_user_cluster[g]) + base;
    const double err = t.value - est;
    sum += err * err;
  });
  cost += sum;
  return cost;
}

// Move the most-misfit member of a multi-member cluster into each empty
// cluster (ascending), keeping cluster counts usable.
inline void reseed_empty_clusters(const RatingMatrix& train, CoClusteringModel& mdl,
                                  bool users) {
  const std::uint32_t count = users ? mdl.n_user_clusters : mdl.n_item_clusters;
  const std::uint32_t points = users ? mdl.m : mdl.n;
  auto& assign = users ? mdl.user_cluster : mdl.item_cluster;
  std::vector<std::uint32_t> members(count, 0);
  for (std::uint32_t p = 0; p < points; ++p) ++members[assign[p]];
  for (std::uint32_t c = 0; c < count; ++c) {
    if (members[c] != 0) continue;
    double worst = -1.0;
    std::uint32_t pick = UINT32_MAX;
    for (std::uint32_t p = 0; p < points; ++p) {
      if (members[assign[p]] < 2) continue;
      const double cost = users ? user_cost(train, mdl, p, assign[p])
                                : item_cost(train, mdl, p, assign[p]);
      if (cost > worst) {
        worst = cost;
        pick = p;
      }
    }
    if (pick == UINT32_MAX) continue;  // nothing to donate
    --members[assign[pick]];
    assign[pick] = c;
    ++members[c];
  }
}

}  // namespace detail

inline CoClusteringModel fit_co_clustering(const Hyperparams& params, const RatingMatrix& train) {
  validate_hyperparams(AlgorithmId::co_clustering, params);
  CoClusteringModel mdl;
  mdl.m = train.m();
  mdl.n = train.n();
  mdl.n_user_clusters = params.n_user_clusters;
  mdl.n_item_clusters = params.n_item_clusters;
  mdl.mu = train.global_mean();

  mdl.user_mean.assign(mdl.m, mdl.mu);
  mdl.item_mean.assign(mdl.n, mdl.mu);
  mdl.known_user.resize(mdl.m);
  mdl.known_item.resize(mdl.n);
  for (std::uint32_t u = 0; u < mdl.m; ++u) {
    const auto r = train.row(u);
    mdl.known_user[u] = !r.empty();
    if (r.empty()) continue;
    double sum = 0.0;
    for (const Rating& t : r) sum += t.value;
    mdl.user_mean[u] = sum / static_cast<double>(r.size());
  }
  for (std::uint32_t i = 0; i < mdl.n; ++i) {
    double sum = 0.0;
    std::uint64_t cnt = 0;
    train.for_each_in_col(i, [&](const Rating& t) {
      sum += t.value;
      ++cnt;
    });
    mdl.known_item[i] = cnt > 0;
    if (cnt > 0) mdl.item_mean[i] = sum / static_cast<double>(cnt);
  }

  Xoshiro256ss rng(params.rng_seed);
  mdl.user_cluster.resize(mdl.m);
  mdl.item_cluster.resize(mdl.n);
  for (std::uint32_t u = 0; u < mdl.m; ++u)
    mdl.user_cluster[u] = static_cast<std::uint32_t>(rng.below(mdl.n_user_clusters));
  for (std::uint32_t i = 0; i < mdl.n; ++i)
    mdl.item_cluster[i] = static_cast<std::uint32_t>(rng.below(mdl.n_item_clusters));

  detail::cocluster_averages(train, mdl);
  mdl.sse_per_epoch.push_back(detail::cocluster_sse(train, mdl));

  for (std::uint32_t epoch = 0; epoch < params.n_epochs; ++epoch) {
    const auto snapshot_users = mdl.user_cluster;
    const auto snapshot_items = mdl.item_cluster;
    const auto snapshot_coc = mdl.avg_cocluster;
    const auto snapshot_gu = mdl.avg_user_cluster;
    const auto snapshot_hi = mdl.avg_item_cluster;

    for (std::uint32_t u = 0; u < mdl.m; ++u) {
      if (!mdl.known_user[u]) continue;
      double best = std::numeric_limits<double>::infinity();
      std::uint32_t best_g = mdl.user_cluster[u];
      for (std::uint32_t g = 0; g < mdl.n_user_clusters; ++g) {
        const double cost = detail::user_cost(train, mdl, u, g);
        if (cost < best) {
          best = cost;
          best_g = g;
        }
      }
      mdl.user_cluster[u] = best_g;
    }
    detail::reseed_empty_clusters(train, mdl, true);

    for (std::uint32_t i = 0; i < mdl.n; ++i) {
      if (!mdl.known_item[i]) continue;
      double best = std::numeric_limits<double>::infinity();
      std::uint32_t best_h = mdl.item_cluster[i];
      for (std::uint32_t h = 0; h < mdl.n_item_clusters; ++h) {
        const double cost = detail::item_cost(train, mdl, i, h);
        if (cost < best) {
          best = cost;
          best_h = h;
        }
      }
      mdl.item_cluster[i] = best_h;
    }
    detail::reseed_empty_clusters(train, mdl, false);

    detail::cocluster_averages(train, mdl);
    const double sse = detail::cocluster_sse(train, mdl);
    if (sse > mdl.sse_per_epoch.back()) {
      mdl.user_cluster = snapshot_users;
      mdl.item_cluster = snapshot_items;
      mdl.avg_cocluster = snapshot_coc;
      mdl.avg_user_cluster = snapshot_gu;
      mdl.avg_item_cluster = snapshot_hi;
      break;
    }
    mdl.sse_per_epoch.push_back(sse);
  }
  return mdl;
}

}  // namespace rdc
