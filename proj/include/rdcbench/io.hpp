#pragma once

// Dataset ingestion and the canonical triple-file format.
//
// Supported inputs:
//   ml-1m   "UserID::MovieID::Rating::Timestamp", no header
//   ml-25m  CSV "userId,movieId,rating,timestamp" with one header line
//   yahoo   tab-separated "user item rating"
//   triples canonical format written by save_triples():
//             header "m n n_ratings scale_min scale_max scale_step"
//             then one "user item rating" line per rating, 0-based indices
//
// Loaders compact raw ids to dense 0-based indices in ascending raw-id order
// and keep the raw-id maps; duplicate (user, item) pairs keep the last
// occurrence. Every user/item in a loaded matrix has at least one rating.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "rdcbench/rating_matrix.hpp"
#include "rdcbench/util.hpp"

namespace rdc {

enum class DatasetFormat { ml_1m, ml_25m, yahoo, triples };

inline std::optional<DatasetFormat> parse_dataset_format(std::string_view s) {
  std::string t = str::lower(str::trim(s));
  if (t == "ml-1m") return DatasetFormat::ml_1m;
  if (t == "ml-25m") return DatasetFormat::ml_25m;
  if (t == "yahoo") return DatasetFormat::yahoo;
  if (t == "triples") return DatasetFormat::triples;
  return std::nullopt;
}

inline const char* dataset_format_name(DatasetFormat f) {
  switch (f) {
    case DatasetFormat::ml_1m: return "ml-1m";
    case DatasetFormat::ml_25m: return "ml-25m";
    case DatasetFormat::yahoo: return "yahoo";
    case DatasetFormat::triples: return "triples";
  }
  return "?";
}

// Scale implied by the format; triples files carry their own.
inline std::optional<RatingScale> default_scale(DatasetFormat f) {
  switch (f) {
    case DatasetFormat::ml_1m: return RatingScale::movielens_1m();
    case DatasetFormat::ml_25m: return RatingScale::movielens_25m();
    case DatasetFormat::yahoo: return RatingScale::yahoo_music();
    case DatasetFormat::triples: return std::nullopt;
  }
  return std::nullopt;
}

struct LoadedDataset {
  RatingMatrix matrix;
  std::vector<std::int64_t> user_ids;  // compact index -> raw id
  std::vector<std::int64_t> item_ids;
};

namespace detail {

struct RawTriple {
  std::int64_t user;
  std::int64_t item;
  double value;
};

inline LoadedDataset compact_and_build(std::vector<RawTriple> raw, const RatingScale& scale,
                                       const std::string& source_id) {
  if (raw.empty()) throw Error(source_id + ": no ratings");

  // Keep the last occurrence of each (user, item) pair: stable sort preserves
  // file order within equal keys, then take the final entry of every run.
  std::stable_sort(raw.begin(), raw.end(), [](const RawTriple& a, const RawTriple& b) {
    return a.user != b.user ? a.user < b.user : a.item < b.item;
  });
  std::vector<RawTriple> kept;
  kept.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (i + 1 < raw.size() && raw[i].user == raw[i + 1].user && raw[i].item == raw[i + 1].item)
      continue;
    kept.push_back(raw[i]);
  }

  std::vector<std::int64_t> users, items;
  users.reserve(kept.size());
  items.reserve(kept.size());
  for (const RawTriple& t : kept) {
    users.push_back(t.user);
    items.push_back(t.item);
  }
  std::sort(users.begin(), users.end());
  users.erase(std::unique(users.begin(), users.end()), users.end());
  std::sort(items.begin(), items.end());
  items.erase(std::unique(items.begin(), items.end()), items.end());

  auto index_of = [](const std::vector<std::int64_t>& ids, std::int64_t id) {
    return static_cast<std::uint32_t>(
        std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
  };

  std::vector<Rating> triples;
  triples.reserve(kept.size());
  for (const RawTriple& t : kept)
    triples.push_back({index_of(users, t.user), index_of(items, t.item), t.value});

  RatingMatrix matrix(static_cast<std::uint32_t>(users.size()),
                      static_cast<std::uint32_t>(items.size()),
                      std::move(triples), scale, source_id);
  return {std::move(matrix), std::move(users), std::move(items)};
}

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return in;
}

// One "user<delim>item<delim>rating[<delim>...]" line; extra fields (e.g. a
// timestamp) are ignored.
inline RawTriple parse_delimited_line(std::string_view line, std::string_view delim,
                                      const RatingScale& scale, const std::string& path,
                                      std::size_t line_no) {
  auto fields = str::split(line, delim);
  auto fail = [&](const std::string& what) -> Error {
    return Error(path + ": line " + std::to_string(line_no) + ": " + what);
  };
  if (fields.size() < 3) throw fail("malformed line (expected user, item, rating)");
  auto user = str::parse_i64(fields[0]);
  auto item = str::parse_i64(fields[1]);
  auto value = str::parse_f64(fields[2]);
  if (!user || !item || !value) throw fail("malformed line (expected user, item, rating)");
  if (!scale.contains(*value))
    throw fail("rating " + std::string(str::trim(fields[2])) + " outside scale [" +
               str::format_double(scale.min_value) + ", " +
               str::format_double(scale.max_value) + "]");
  return {*user, *item, *value};
}

}  // namespace detail

// MovieLens-style loader; delimiter "::" for the 1M .dat files, "," for the
// 25M CSV files. A leading header line (first field starting with "user",
// as in "userId,movieId,rating,timestamp") is skipped.
inline LoadedDataset load_movielens_delimited(const std::string& path, const std::string& delimiter,
                                              const RatingScale& scale) {
  scale.validate();
  std::ifstream in = detail::open_input(path);
  std::vector<detail::RawTriple> raw;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view body = str::trim(line);
    if (body.empty()) continue;
    if (line_no == 1 && str::lower(body.substr(0, 4)) == "user") continue;  // CSV header
    raw.push_back(detail::parse_delimited_line(body, delimiter, scale, path, line_no));
  }
  return detail::compact_and_build(std::move(raw), scale, path);
}

// Yahoo! Music-style loader: tab-separated "user item rating".
inline LoadedDataset load_yahoo_ratings(const std::string& path, const RatingScale& scale) {
  scale.validate();
  std::ifstream in = detail::open_input(path);
  std::vector<detail::RawTriple> raw;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view body = str::trim(line);
    if (body.empty()) continue;
    raw.push_back(detail::parse_delimited_line(body, "\t", scale, path, line_no));
  }
  return detail::compact_and_build(std::move(raw), scale, path);
}

// Canonical triple file. Indices are already dense and 0-based; duplicates
// are rejected rather than merged.
inline RatingMatrix load_triples(const std::string& path) {
  std::ifstream in = detail::open_input(path);
  std::string line;
  if (!std::getline(in, line)) throw Error(path + ": empty file");
  auto header = str::split_whitespace(str::trim(line));
  if (header.size() != 6)
    throw Error(path + ": line 1: expected header \"m n n_ratings scale_min scale_max scale_step\"");
  auto m = str::parse_u64(header[0]);
  auto n = str::parse_u64(header[1]);
  auto count = str::parse_u64(header[2]);
  auto smin = str::parse_f64(header[3]);
  auto smax = str::parse_f64(header[4]);
  auto sstep = str::parse_f64(header[5]);
  if (!m || !n || !count || !smin || !smax || !sstep)
    throw Error(path + ": line 1: malformed header");
  if (*count == 0) throw Error(path + ": no ratings");
  RatingScale scale{*smin, *smax, *sstep};
  scale.validate();

  std::vector<Rating> triples;
  triples.reserve(*count);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view body = str::trim(line);
    if (body.empty()) continue;
    auto fields = str::split_whitespace(body);
    auto fail = [&](const std::string& what) -> Error {
      return Error(path + ": line " + std::to_string(line_no) + ": " + what);
    };
    if (fields.size() != 3) throw fail("malformed line (expected \"user item rating\")");
    auto user = str::parse_u64(fields[0]);
    auto item = str::parse_u64(fields[1]);
    auto value = str::parse_f64(fields[2]);
    if (!user || !item || !value) throw fail("malformed line (expected \"user item rating\")");
    if (*user >= *m || *item >= *n) throw fail("index out of declared range");
    if (!scale.contains(*value))
      throw fail("rating " + str::format_double(*value) + " outside scale [" +
                 str::format_double(scale.min_value) + ", " +
                 str::format_double(scale.max_value) + "]");
    triples.push_back({static_cast<std::uint32_t>(*user), static_cast<std::uint32_t>(*item), *value});
  }
  if (triples.size() != *count)
    throw Error(path + ": header declares " + std::to_string(*count) + " ratings, file has " +
                std::to_string(triples.size()));
  return RatingMatrix(static_cast<std::uint32_t>(*m), static_cast<std::uint32_t>(*n),
                      std::move(triples), scale, path);
}

inline void save_triples(const RatingMatrix& matrix, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  const RatingScale& s = matrix.scale();
  out << matrix.m() << ' ' << matrix.n() << ' ' << matrix.n_ratings() << ' '
      << str::format_double(s.min_value) << ' ' << str::format_double(s.max_value) << ' '
      << str::format_double(s.step) << '\n';
  for (const Rating& r : matrix.triples())
    out << r.user << ' ' << r.item << ' ' << str::format_double(r.value) << '\n';
  if (!out) throw Error("write failed: " + path);
}

// Dispatch on format. The scale override applies to the raw-id formats; a
// triples file always uses its embedded scale.
inline LoadedDataset load_dataset(const std::string& path, DatasetFormat format,
                                  std::optional<RatingScale> scale_override = std::nullopt) {
  switch (format) {
    case DatasetFormat::ml_1m:
      return load_movielens_delimited(path, "::",
                                      scale_override.value_or(RatingScale::movielens_1m()));
    case DatasetFormat::ml_25m:
      return load_movielens_delimited(path, ",",
                                      scale_override.value_or(RatingScale::movielens_25m()));
    case DatasetFormat::yahoo:
      return load_yahoo_ratings(path, scale_override.value_or(RatingScale::yahoo_music()));
    case DatasetFormat::triples: {
      RatingMatrix m = load_triples(path);
      std::vector<std::int64_t> users(m.m()), items(m.n());
      for (std::uint32_t u = 0; u < m.m(); ++u) users[u] = u;
      for (std::uint32_t i = 0; i < m.n(); ++i) items[i] = i;
      return {std::move(m), std::move(users), std::move(items)};
    }
  }
  throw Error("unknown dataset format");
}

}  // namespace rdc
