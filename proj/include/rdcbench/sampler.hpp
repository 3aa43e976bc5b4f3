#pragma once

// Random URM subsampling. sample_one picks users and items uniformly without
// replacement, restricts the parent's ratings to the selection, prunes
// under-filled rows/columns to a fixed point, and re-compacts indices.
// sample_batch enumerates attempts k = 0, 1, ... with attempt seed
// mix_seed(master_seed, k); row/column targets for attempt k are drawn from a
// stream seeded with mix_seed(attempt_seed, kTargetStreamTag). Degenerate
// attempts (pruned to empty) are skipped; the batch is the first n_samples
// successes, with at most 10 * n_samples attempts.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rdcbench/rating_matrix.hpp"
#include "rdcbench/rng.hpp"
#include "rdcbench/util.hpp"

namespace rdc {

inline constexpr std::uint64_t kTargetStreamTag = 8;

struct SamplePlan {
  std::uint64_t n_samples = 1;
  std::uint32_t m_min = 1, m_max = 1;
  std::uint32_t n_min = 1, n_max = 1;
  std::uint32_t min_ratings_per_row = 1;
  std::uint32_t min_ratings_per_col = 1;
  std::uint64_t master_seed = 0;

  void validate(std::uint32_t parent_m, std::uint32_t parent_n) const {
    if (n_samples < 1) throw std::invalid_argument("sample plan: n_samples must be >= 1");
    if (m_min < 1 || m_min > m_max || m_max > parent_m)
      throw std::invalid_argument("sample plan: user range must lie within [1, parent m]");
    if (n_min < 1 || n_min > n_max || n_max > parent_n)
      throw std::invalid_argument("sample plan: item range must lie within [1, parent n]");
  }
};

struct SampledUrm {
  RatingMatrix matrix;
  std::uint32_t requested_m;
  std::uint32_t requested_n;
  RdcProfile profile;
  std::uint64_t sample_seed;
  std::vector<std::uint32_t> user_map;  // compact index -> parent index
  std::vector<std::uint32_t> item_map;
};

class DegenerateSampleError : public Error {
 public:
  explicit DegenerateSampleError(std::uint64_t seed)
      : Error("degenerate sample: pruning emptied the matrix (seed " + std::to_string(seed) + ")"),
        seed_(seed) {}
  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
};

namespace detail {

// Fixed-point pruning of under-filled rows/columns. The surviving set is the
// unique maximal subset in which every kept user has >= min_per_row ratings
// and every kept item has >= min_per_col, so pruning order does not matter.
inline void prune_to_fixed_point(std::vector<Rating>& triples, std::uint32_t parent_m,
                                 std::uint32_t parent_n, std::uint32_t min_per_row,
                                 std::uint32_t min_per_col) {
  std::vector<std::uint32_t> user_deg(parent_m, 0), item_deg(parent_n, 0);
  bool changed = true;
  while (changed && !triples.empty()) {
    std::fill(user_deg.begin(), user_deg.end(), 0);
    std::fill(item_deg.begin(), item_deg.end(), 0);
    for (const Rating& r : triples) {
      ++user_deg[r.user];
      ++item_deg[r.item];
    }
    std::size_t kept = 0;
    for (const Rating& r : triples) {
      if (user_deg[r.user] >= min_per_row && item_deg[r.item] >= min_per_col)
        triples[kept++] = r;
    }
    changed = kept != triples.size();
    triples.resize(kept);
  }
}

struct Compacted {
  RatingMatrix matrix;
  std::vector<std::uint32_t> user_map;  // compact index -> parent index, ascending
  std::vector<std::uint32_t> item_map;
};

inline Compacted compact(std::vector<Rating> triples, std::uint32_t parent_m,
                         std::uint32_t parent_n, const RatingScale& scale,
                         const std::string& source_id) {
  std::vector<std::uint32_t> user_idx(parent_m, UINT32_MAX), item_idx(parent_n, UINT32_MAX);
  for (const Rating& r : triples) {
    user_idx[r.user] = 0;
    item_idx[r.item] = 0;
  }
  std::vector<std::uint32_t> user_map, item_map;
  for (std::uint32_t u = 0; u < parent_m; ++u)
    if (user_idx[u] != UINT32_MAX) {
      user_idx[u] = static_cast<std::uint32_t>(user_map.size());
      user_map.push_back(u);
    }
  for (std::uint32_t i = 0; i < parent_n; ++i)
    if (item_idx[i] != UINT32_MAX) {
      item_idx[i] = static_cast<std::uint32_t>(item_map.size());
      item_map.push_back(i);
    }
  for (Rating& r : triples) {
    r.user = user_idx[r.user];
    r.item = item_idx[r.item];
  }
  RatingMatrix matrix(static_cast<std::uint32_t>(user_map.size()),
                      static_cast<std::uint32_t>(item_map.size()), std::move(triples), scale,
                      source_id);
  return {std::move(matrix), std::move(user_map), std::move(item_map)};
}

}  // namespace detail

inline SampledUrm sample_one(const RatingMatrix& parent, std::uint32_t m_target,
                             std::uint32_t n_target, std::uint32_t min_per_row,
                             std::uint32_t min_per_col, std::uint64_t seed) {
  if (m_target < 1 || m_target > parent.m() || n_target < 1 || n_target > parent.n())
    throw std::invalid_argument("sample_one: target outside [1, parent dimension]");

  Xoshiro256ss rng(seed);
  std::vector<std::uint32_t> users = rng.sample_indices(parent.m(), m_target);
  std::vector<std::uint32_t> items = rng.sample_indices(parent.n(), n_target);

  std::vector<std::uint8_t> item_selected(parent.n(), 0);
  for (std::uint32_t i : items) item_selected[i] = 1;

  std::vector<Rating> triples;
  for (std::uint32_t u : users)
    for (const Rating& r : parent.row(u))
      if (item_selected[r.item]) triples.push_back(r);

  detail::prune_to_fixed_point(triples, parent.m(), parent.n(), min_per_row, min_per_col);
  if (triples.empty()) throw DegenerateSampleError(seed);

  detail::Compacted c = detail::compact(std::move(triples), parent.m(), parent.n(),
                                        parent.scale(),
                                        parent.source_id() + "#sample:" + std::to_string(seed));
  RdcProfile profile = rdc_profile(c.matrix);
  return {std::move(c.matrix), m_target, n_target, profile, seed,
          std::move(c.user_map), std::move(c.item_map)};
}

// Called once per skipped degenerate attempt: (attempt index, seed).
using SkipCallback = std::function<void(std::uint64_t, std::uint64_t)>;

inline std::vector<SampledUrm> sample_batch(const RatingMatrix& parent, const SamplePlan& plan,
                                            const SkipCallback& on_skip = nullptr) {
  plan.validate(parent.m(), parent.n());
  std::vector<SampledUrm> out;
  out.reserve(plan.n_samples);
  const std::uint64_t max_attempts = 10 * plan.n_samples;
  for (std::uint64_t k = 0; k < max_attempts && out.size() < plan.n_samples; ++k) {
    const std::uint64_t seed_k = mix_seed(plan.master_seed, k);
    Xoshiro256ss target_rng(mix_seed(seed_k, kTargetStreamTag));
    const auto m_target = static_cast<std::uint32_t>(target_rng.uniform_int(plan.m_min, plan.m_max));
    const auto n_target = static_cast<std::uint32_t>(target_rng.uniform_int(plan.n_min, plan.n_max));
    try {
      out.push_back(sample_one(parent, m_target, n_target, plan.min_ratings_per_row,
                               plan.min_ratings_per_col, seed_k));
    } catch (const DegenerateSampleError&) {
      if (on_skip) on_skip(k, seed_k);
    }
  }
  if (out.size() < plan.n_samples)
    throw Error("sample_batch: attempt budget exhausted (" + std::to_string(out.size()) + " of " +
                std::to_string(plan.n_samples) + " samples after " +
                std::to_string(max_attempts) + " attempts)");
  return out;
}

}  // namespace rdc
