#pragma once

// Opaque binary caching of trained models. Format: "RDCM" magic, format
// version, then a straight dump of the model state (native endianness; the
// format is a cache, not an interchange format, and is not stable across
// versions).

#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "rdcbench/cf/model.hpp"
#include "rdcbench/util.hpp"

namespace rdc {

namespace detail {

inline constexpr std::uint32_t kModelFormatVersion = 1;

struct BinWriter {
  std::ostream& out;

  void bytes(const void* p, std::size_t len) { out.write(static_cast<const char*>(p), len); }
  void u8(std::uint8_t v) { bytes(&v, 1); }
  void u32(std::uint32_t v) { bytes(&v, 4); }
  void u64(std::uint64_t v) { bytes(&v, 8); }
  void f64(double v) { bytes(&v, 8); }
  void str(const std::string& s) {
    u64(s.size());
    bytes(s.data(), s.size());
  }
  template <class T>
  void vec(const std::vector<T>& v) {
    u64(v.size());
    bytes(v.data(), v.size() * sizeof(T));
  }
};

struct BinReader {
  std::istream& in;

  void bytes(void* p, std::size_t len) {
    in.read(static_cast<char*>(p), len);
    if (!in) throw Error("model file: truncated");
  }
  std::uint8_t u8() {
    std::uint8_t v;
    bytes(&v, 1);
    return v;
  }
  std::uint32_t u32() {
    std::uint32_t v;
    bytes(&v, 4);
    return v;
  }
  std::uint64_t u64() {
    std::uint64_t v;
    bytes(&v, 8);
    return v;
  }
  double f64() {
    double v;
    bytes(&v, 8);
    return v;
  }
  std::string str() {
    std::string s(u64(), '\0');
    bytes(s.data(), s.size());
    return s;
  }
  template <class T>
  std::vector<T> vec() {
    std::vector<T> v(u64());
    bytes(v.data(), v.size() * sizeof(T));
    return v;
  }
};

inline void write_matrix(BinWriter& w, const RatingMatrix& m) {
  w.u32(m.m());
  w.u32(m.n());
  w.f64(m.scale().min_value);
  w.f64(m.scale().max_value);
  w.f64(m.scale().step);
  w.str(m.source_id());
  w.u64(m.n_ratings());
  for (const Rating& r : m.triples()) {
    w.u32(r.user);
    w.u32(r.item);
    w.f64(r.value);
  }
}

inline RatingMatrix read_matrix(BinReader& r) {
  const std::uint32_t m = r.u32();
  const std::uint32_t n = r.u32();
  RatingScale scale{r.f64(), r.f64(), r.f64()};
  const std::string source = r.str();
  std::vector<Rating> triples(r.u64());
  for (Rating& t : triples) {
    t.user = r.u32();
    t.item = r.u32();
    t.value = r.f64();
  }
  return RatingMatrix(m, n, std::move(triples), scale, source);
}

}  // namespace detail

inline void save_model(const TrainedModel& model, std::ostream& out) {
  detail::BinWriter w{out};
  w.bytes("RDCM", 4);
  w.u32(detail::kModelFormatVersion);
  w.u8(static_cast<std::uint8_t>(model.algorithm));
  w.f64(model.scale.min_value);
  w.f64(model.scale.max_value);
  w.f64(model.scale.step);
  w.f64(model.global_mean);

  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, FactorModel>) {
          w.u8(s.biased);
          w.u8(s.non_negative);
          w.u32(s.n_factors);
          w.u32(s.m);
          w.u32(s.n);
          w.f64(s.mu);
          w.vec(s.pu);
          w.vec(s.qi);
          w.vec(s.bu);
          w.vec(s.bi);
          w.vec(s.known_user);
          w.vec(s.known_item);
        } else if constexpr (std::is_same_v<T, SlopeOneModel>) {
          w.u32(s.m);
          w.u32(s.n);
          w.f64(s.mu);
          w.vec(s.user_mean);
          w.vec(s.known_user);
          w.vec(s.known_item);
          w.u8(s.dense);
          if (s.dense) {
            w.vec(s.dev);
            w.vec(s.cnt);
          } else {
            w.u64(s.table.size());
            for (const auto& [key, cell] : s.table) {
              w.u64(key);
              w.f64(cell.first);
              w.u32(cell.second);
            }
          }
          detail::write_matrix(w, *s.train);
        } else if constexpr (std::is_same_v<T, CoClusteringModel>) {
          w.u32(s.m);
          w.u32(s.n);
          w.u32(s.n_user_clusters);
          w.u32(s.n_item_clusters);
          w.f64(s.mu);
          w.vec(s.user_mean);
          w.vec(s.item_mean);
          w.vec(s.known_user);
          w.vec(s.known_item);
          w.vec(s.user_cluster);
          w.vec(s.item_cluster);
          w.vec(s.avg_cocluster);
          w.vec(s.avg_user_cluster);
          w.vec(s.avg_item_cluster);
          w.vec(s.sse_per_epoch);
        } else {
          static_assert(std::is_same_v<T, KnnModel>);
          w.u8(s.user_based);
          w.u32(s.k);
          w.u32(s.min_k);
          w.u8(static_cast<std::uint8_t>(s.similarity));
          w.u32(s.x_count);
          w.f64(s.mu);
          w.vec(s.sim);
          detail::write_matrix(w, s.train);
        }
      },
      model.state);
  if (!out) throw Error("model write failed");
}

inline TrainedModel load_model(std::istream& in) {
  detail::BinReader r{in};
  char magic[4];
  r.bytes(magic, 4);
  if (std::memcmp(magic, "RDCM", 4) != 0) throw Error("model file: bad magic");
  const std::uint32_t version = r.u32();
  if (version != detail::kModelFormatVersion)
    throw Error("model file: unsupported version " + std::to_string(version));
  const auto algorithm = static_cast<AlgorithmId>(r.u8());
  RatingScale scale{r.f64(), r.f64(), r.f64()};
  const double mu = r.f64();

  TrainedModel model{algorithm, scale, mu, FactorModel{}};
  switch (algorithm) {
    case AlgorithmId::svd:
    case AlgorithmId::svd_b:
    case AlgorithmId::nmf: {
      FactorModel s;
      s.biased = r.u8();
      s.non_negative = r.u8();
      s.n_factors = r.u32();
      s.m = r.u32();
      s.n = r.u32();
      s.mu = r.f64();
      s.pu = r.vec<double>();
      s.qi = r.vec<double>();
      s.bu = r.vec<double>();
      s.bi = r.vec<double>();
      s.known_user = r.vec<std::uint8_t>();
      s.known_item = r.vec<std::uint8_t>();
      model.state = std::move(s);
      break;
    }
    case AlgorithmId::slope_one: {
      SlopeOneModel s;
      s.m = r.u32();
      s.n = r.u32();
      s.mu = r.f64();
      s.user_mean = r.vec<double>();
      s.known_user = r.vec<std::uint8_t>();
      s.known_item = r.vec<std::uint8_t>();
      s.dense = r.u8();
      if (s.dense) {
        s.dev = r.vec<double>();
        s.cnt = r.vec<std::uint32_t>();
      } else {
        const std::uint64_t count = r.u64();
        for (std::uint64_t i = 0; i < count; ++i) {
          const std::uint64_t key = r.u64();
          const double d = r.f64();
          const std::uint32_t c = r.u32();
          s.table.emplace(key, std::make_pair(d, c));
        }
      }
      s.train = detail::read_matrix(r);
      model.state = std::move(s);
      break;
    }
    case AlgorithmId::co_clustering: {
      CoClusteringModel s;
      s.m = r.u32();
      s.n = r.u32();
      s.n_user_clusters = r.u32();
      s.n_item_clusters = r.u32();
      s.mu = r.f64();
      s.user_mean = r.vec<double>();
      s.item_mean = r.vec<double>();
      s.known_user = r.vec<std::uint8_t>();
      s.known_item = r.vec<std::uint8_t>();
      s.user_cluster = r.vec<std::uint32_t>();
      s.item_cluster = r.vec<std::uint32_t>();
      s.avg_cocluster = r.vec<double>();
      s.avg_user_cluster = r.vec<double>();
      s.avg_item_cluster = r.vec<double>();
      s.sse_per_epoch = r.vec<double>();
      model.state = std::move(s);
      break;
    }
    case AlgorithmId::unn:
    case AlgorithmId::inn: {
      const bool user_based = r.u8();
      const std::uint32_t k = r.u32();
      const std::uint32_t min_k = r.u32();
      const auto similarity = static_cast<Similarity>(r.u8());
      const std::uint32_t x_count = r.u32();
      const double kmu = r.f64();
      auto sim = r.vec<double>();
      RatingMatrix train = detail::read_matrix(r);
      model.state =
          KnnModel{user_based, k, min_k, similarity, x_count, kmu, std::move(sim), std::move(train)};
      break;
    }
  }
  return model;
}

inline void save_model(const TrainedModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  save_model(model, out);
}

inline TrainedModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  return load_model(in);
}

}  // namespace rdc
