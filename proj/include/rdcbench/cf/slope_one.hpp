#pragma once

// Slope One: per item pair, the average rating deviation over co-rating
// users plus the co-rating count. Deterministic, no seed. The deviation
// table is a dense n x n array for small item counts and a hash map above
// kSlopeOneDenseLimit (build cost is sum over users of degree^2 either way).

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rdcbench/cf/hyperparams.hpp"
#include "rdcbench/rating_matrix.hpp"

namespace rdc {

inline constexpr std::uint32_t kSlopeOneDenseLimit = 3000;

struct SlopeOneModel {
  std::uint32_t m = 0, n = 0;
  double mu = 0.0;
  std::vector<double> user_mean;  // mu where the user has no ratings
  std::vector<std::uint8_t> known_user, known_item;
  std::optional<RatingMatrix> train;  // rated-item lists used at estimate time

  bool dense = true;
  std::vector<double> dev;          // n*n averaged deviations (dense mode)
  std::vector<std::uint32_t> cnt;   // n*n co-rating counts (dense mode)
  std::unordered_map<std::uint64_t, std::pair<double, std::uint32_t>> table;  // i < j

  // averaged deviation dev(i, j) and co-rating count; count 0 when no user
  // rated both
  std::pair<double, std::uint32_t> deviation(std::uint32_t i, std::uint32_t j) const {
    if (dense) {
      const std::size_t idx = static_cast<std::size_t>(i) * n + j;
      return {dev[idx], cnt[idx]};
    }
    const bool flip = i > j;
    const std::uint64_t key =
        (static_cast<std::uint64_t>(flip ? j : i) << 32) | (flip ? i : j);
    auto it = table.find(key);
    if (it == table.end()) return {0.0, 0};
    return {flip ? -it->second.first : it->second.first, it->second.second};
  }

  // Unclipped estimate: user mean plus the average deviation dev(i, j) over
  // the items j the user rated that co-occur with i. Unknown user -> mu;
  // unknown item -> user mean.
  double estimate(std::uint64_t user, std::uint64_t item) const {
    if (user >= m || !known_user[user]) return mu;
    const auto u = static_cast<std::uint32_t>(user);
    if (item >= n || !known_item[item]) return user_mean[u];
    const auto i = static_cast<std::uint32_t>(item);
    double dsum = 0.0;
    std::uint32_t relevant = 0;
    for (const Rating& r : train->row(u)) {
      if (r.item == i) continue;
      auto [d, c] = deviation(i, r.item);
      if (c > 0) {
        dsum += d;
        ++relevant;
      }
    }
    double est = user_mean[u];
    if (relevant > 0) est += dsum / static_cast<double>(relevant);
    return est;
  }
};

inline SlopeOneModel fit_slope_one(const RatingMatrix& train) {
  SlopeOneModel mdl;
  mdl.m = train.m();
  mdl.n = train.n();
  mdl.mu = train.global_mean();
  mdl.train = train;
  mdl.dense = train.n() <= kSlopeOneDenseLimit;

  mdl.user_mean.assign(mdl.m, mdl.mu);
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
  for (std::uint32_t i = 0; i < mdl.n; ++i) mdl.known_item[i] = train.item_degree(i) > 0;

  if (mdl.dense) {
    const std::size_t nn = static_cast<std::size_t>(mdl.n) * mdl.n;
    mdl.dev.assign(nn, 0.0);
    mdl.cnt.assign(nn, 0);
    for (std::uint32_t u = 0; u < mdl.m; ++u) {
      const auto r = train.row(u);
      for (std::size_t a = 0; a < r.size(); ++a)
        for (std::size_t b = a + 1; b < r.size(); ++b) {
          const std::size_t ij = static_cast<std::size_t>(r[a].item) * mdl.n + r[b].item;
          const std::size_t ji = static_cast<std::size_t>(r[b].item) * mdl.n + r[a].item;
          const double d = r[a].value - r[b].value;
          mdl.dev[ij] += d;
          mdl.dev[ji] -= d;
          ++mdl.cnt[ij];
          ++mdl.cnt[ji];
        }
    }
    for (std::size_t idx = 0; idx < nn; ++idx)
      if (mdl.cnt[idx] > 0) mdl.dev[idx] /= static_cast<double>(mdl.cnt[idx]);
  } else {
    for (std::uint32_t u = 0; u < mdl.m; ++u) {
      const auto r = train.row(u);
      for (std::size_t a = 0; a < r.size(); ++a)
        for (std::size_t b = a + 1; b < r.size(); ++b) {
          const std::uint64_t key =
              (static_cast<std::uint64_t>(r[a].item) << 32) | r[b].item;
          auto& cell = mdl.table[key];
          cell.first += r[a].value - r[b].value;
          ++cell.second;
        }
    }
    for (auto& [key, cell] : mdl.table) cell.first /= static_cast<double>(cell.second);
  }
  return mdl;
}

}  // namespace rdc
