#pragma once

// Sparse user-item rating storage with dual sorted access (rows for
// factorization sweeps, columns for neighbor and deviation computations)
// plus the per-matrix rating-data characteristics.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rdcbench/util.hpp"

namespace rdc {

// Discrete rating scale declared by the source dataset.
struct RatingScale {
  double min_value = 1.0;
  double max_value = 5.0;
  double step = 1.0;

  void validate() const {
    if (!(min_value < max_value)) throw Error("rating scale: min must be < max");
    if (!(step > 0)) throw Error("rating scale: step must be > 0");
    const double span = (max_value - min_value) / step;
    if (std::abs(span - std::round(span)) > 1e-9)
      throw Error("rating scale: (max - min) must be an integer multiple of step");
  }

  bool contains(double v) const { return v >= min_value && v <= max_value; }

  static RatingScale movielens_1m() { return {1.0, 5.0, 1.0}; }
  static RatingScale movielens_25m() { return {0.5, 5.0, 0.5}; }
  static RatingScale yahoo_music() { return {1.0, 100.0, 1.0}; }
};

struct Rating {
  std::uint32_t user = 0;
  std::uint32_t item = 0;
  double value = 0.0;

  friend bool operator==(const Rating& a, const Rating& b) {
    return a.user == b.user && a.item == b.item && a.value == b.value;
  }
};

// Characteristics of one matrix: dimensions, rating count, information per
// user (n_ratings / m), information per item (n_ratings / n), density.
struct RdcProfile {
  std::uint32_t m = 0;
  std::uint32_t n = 0;
  std::uint64_t n_ratings = 0;
  double ipu = 0.0;
  double ipi = 0.0;
  double density = 0.0;
};

// Immutable after construction; safe for concurrent shared reads.
class RatingMatrix {
 public:
  RatingMatrix(std::uint32_t m, std::uint32_t n, std::vector<Rating> triples,
               RatingScale scale, std::string source_id = "")
      : m_(m), n_(n), triples_(std::move(triples)), scale_(scale),
        source_id_(std::move(source_id)) {
    scale_.validate();
    if (m_ == 0 || n_ == 0) throw Error("rating matrix: zero users or zero items");
    if (triples_.empty()) throw Error("rating matrix: no ratings");
    for (const Rating& r : triples_) {
      if (r.user >= m_) throw Error("rating matrix: user index " + std::to_string(r.user) +
                                    " out of range (m=" + std::to_string(m_) + ")");
      if (r.item >= n_) throw Error("rating matrix: item index " + std::to_string(r.item) +
                                    " out of range (n=" + std::to_string(n_) + ")");
      if (!std::isfinite(r.value) || !scale_.contains(r.value))
        throw Error("rating matrix: rating " + str::format_double(r.value) +
                    " outside scale [" + str::format_double(scale_.min_value) + ", " +
                    str::format_double(scale_.max_value) + "]");
    }
    std::sort(triples_.begin(), triples_.end(), [](const Rating& a, const Rating& b) {
      return a.user != b.user ? a.user < b.user : a.item < b.item;
    });
    for (std::size_t i = 1; i < triples_.size(); ++i) {
      if (triples_[i - 1].user == triples_[i].user && triples_[i - 1].item == triples_[i].item)
        throw Error("rating matrix: duplicate (user, item) pair (" +
                    std::to_string(triples_[i].user) + ", " + std::to_string(triples_[i].item) + ")");
    }
    build_indexes();
  }

  std::uint32_t m() const { return m_; }
  std::uint32_t n() const { return n_; }
  std::uint64_t n_ratings() const { return triples_.size(); }
  const RatingScale& scale() const { return scale_; }
  const std::string& source_id() const { return source_id_; }
  std::span<const Rating> triples() const { return triples_; }

  // Ratings of one user, sorted by item.
  std::span<const Rating> row(std::uint32_t user) const {
    return {triples_.data() + row_offsets_[user],
            triples_.data() + row_offsets_[user + 1]};
  }

  std::uint32_t user_degree(std::uint32_t user) const {
    return static_cast<std::uint32_t>(row_offsets_[user + 1] - row_offsets_[user]);
  }

  std::uint32_t item_degree(std::uint32_t item) const {
    return static_cast<std::uint32_t>(col_offsets_[item + 1] - col_offsets_[item]);
  }

  // Visit the ratings of one item in user order.
  template <class Fn>
  void for_each_in_col(std::uint32_t item, Fn&& fn) const {
    for (std::size_t k = col_offsets_[item]; k < col_offsets_[item + 1]; ++k)
      fn(triples_[col_order_[k]]);
  }

  std::optional<double> value_at(std::uint32_t user, std::uint32_t item) const {
    auto r = row(user);
    auto it = std::lower_bound(r.begin(), r.end(), item,
                               [](const Rating& a, std::uint32_t i) { return a.item < i; });
    if (it != r.end() && it->item == item) return it->value;
    return std::nullopt;
  }

  double global_mean() const { return global_mean_; }

  // True when every user and every item has at least one rating. Loader and
  // sampler outputs are compact; train matrices from a split keep the parent
  // index space and may not be.
  bool is_compact() const {
    for (std::uint32_t u = 0; u < m_; ++u)
      if (user_degree(u) == 0) return false;
    for (std::uint32_t i = 0; i < n_; ++i)
      if (item_degree(i) == 0) return false;
    return true;
  }

 private:
  void build_indexes() {
    row_offsets_.assign(m_ + 1, 0);
    for (const Rating& r : triples_) ++row_offsets_[r.user + 1];
    for (std::uint32_t u = 0; u < m_; ++u) row_offsets_[u + 1] += row_offsets_[u];

    col_offsets_.assign(n_ + 1, 0);
    for (const Rating& r : triples_) ++col_offsets_[r.item + 1];
    for (std::uint32_t i = 0; i < n_; ++i) col_offsets_[i + 1] += col_offsets_[i];

    col_order_.resize(triples_.size());
    std::vector<std::size_t> cursor(col_offsets_.begin(), col_offsets_.end() - 1);
    for (std::size_t k = 0; k < triples_.size(); ++k)
      col_order_[cursor[triples_[k].item]++] = static_cast<std::uint32_t>(k);

    double sum = 0.0;
    for (const Rating& r : triples_) sum += r.value;
    global_mean_ = sum / static_cast<double>(triples_.size());
  }

  std::uint32_t m_;
  std::uint32_t n_;
  std::vector<Rating> triples_;             // sorted by (user, item)
  std::vector<std::size_t> row_offsets_;    // m + 1
  std::vector<std::uint32_t> col_order_;    // indexes into triples_, sorted by (item, user)
  std::vector<std::size_t> col_offsets_;    // n + 1
  RatingScale scale_;
  std::string source_id_;
  double global_mean_ = 0.0;
};

inline RdcProfile rdc_profile(const RatingMatrix& matrix) {
  if (matrix.m() == 0 || matrix.n() == 0) throw Error("rdc profile: zero users or zero items");
  RdcProfile p;
  p.m = matrix.m();
  p.n = matrix.n();
  p.n_ratings = matrix.n_ratings();
  p.ipu = static_cast<double>(p.n_ratings) / static_cast<double>(p.m);
  p.ipi = static_cast<double>(p.n_ratings) / static_cast<double>(p.n);
  p.density = static_cast<double>(p.n_ratings) /
              (static_cast<double>(p.m) * static_cast<double>(p.n));
  return p;
}

}  // namespace rdc
