#pragma once

// End-to-end orchestration: load a dataset, sample URMs, evaluate every
// configured algorithm on every sample, and append one JSON record per
// (sample, algorithm) pair to an append-only JSON-lines file headed by the
// config hash and toolkit version.
//
// Determinism: all randomness derives from the config seeds —
//   sample seed (attempt k)   = mix_seed(master_seed, k)
//   split seed (sample k)     = mix_seed(split_seed, k)
//   fit seed (sample k, algorithm a) = mix_seed(sample_seed_k, 16 + ordinal(a))
// The unit of parallel work is one (sample, algorithm) pair; records are
// buffered and written in task order, so the record set (and the file, up to
// the wall-clock fit_seconds field) is identical for any worker count.
// Restarting with resume skips pairs already present in the record file.

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "rdcbench/config.hpp"
#include "rdcbench/eval.hpp"
#include "rdcbench/io.hpp"
#include "rdcbench/regression.hpp"
#include "rdcbench/sampler.hpp"
#include "rdcbench/version.hpp"

namespace rdc {

inline constexpr std::uint64_t kSplitSeedTag = 9;
inline constexpr std::uint64_t kFitSeedTagBase = 16;

struct ExperimentConfig {
  std::string dataset_path;
  DatasetFormat format = DatasetFormat::triples;
  std::optional<RatingScale> scale_override;
  SamplePlan plan;
  double test_fraction = 0.2;
  std::uint64_t split_seed = 0;
  bool clip = true;
  std::vector<AlgorithmId> algorithms;
  std::map<AlgorithmId, Hyperparams> hyperparams;  // defaults + file overrides
  LogBase log_base = LogBase::natural;
  std::string out_dir = ".";
  std::string records_file = "records.jsonl";  // relative to out_dir
  unsigned workers = 1;

  std::string records_path() const {
    return (std::filesystem::path(out_dir) / records_file).string();
  }
};

namespace detail {

inline const char* kHyperparamKeys[] = {"n_factors",   "n_epochs",   "learning_rate",
                                        "regularization", "init_std", "init_low",
                                        "init_high",   "k",          "min_k",
                                        "similarity",  "user_based", "n_user_clusters",
                                        "n_item_clusters"};

inline void apply_hyperparam_override(Hyperparams& p, const std::string& key,
                                      KeyValueConfig& cfg, const std::string& full_key) {
  if (key == "n_factors") p.n_factors = static_cast<std::uint32_t>(*cfg.get_u64(full_key));
  else if (key == "n_epochs") p.n_epochs = static_cast<std::uint32_t>(*cfg.get_u64(full_key));
  else if (key == "learning_rate") p.learning_rate = *cfg.get_f64(full_key);
  else if (key == "regularization") p.regularization = *cfg.get_f64(full_key);
  else if (key == "init_std") p.init_std = *cfg.get_f64(full_key);
  else if (key == "init_low") p.init_low = *cfg.get_f64(full_key);
  else if (key == "init_high") p.init_high = *cfg.get_f64(full_key);
  else if (key == "k") p.k = static_cast<std::uint32_t>(*cfg.get_u64(full_key));
  else if (key == "min_k") p.min_k = static_cast<std::uint32_t>(*cfg.get_u64(full_key));
  else if (key == "similarity") {
    auto s = parse_similarity(*cfg.get_string(full_key));
    if (!s) throw Error("config: bad similarity for " + full_key);
    p.similarity = *s;
  } else if (key == "user_based") p.user_based = *cfg.get_bool(full_key);
  else if (key == "n_user_clusters") p.n_user_clusters = static_cast<std::uint32_t>(*cfg.get_u64(full_key));
  else if (key == "n_item_clusters") p.n_item_clusters = static_cast<std::uint32_t>(*cfg.get_u64(full_key));
}

}  // namespace detail

inline ExperimentConfig parse_experiment_config(KeyValueConfig& cfg) {
  ExperimentConfig out;

  auto dataset = cfg.get_string("dataset");
  if (!dataset) throw Error(cfg.origin() + ": missing required key \"dataset\"");
  out.dataset_path = *dataset;

  auto format = cfg.get_string("format");
  if (!format) throw Error(cfg.origin() + ": missing required key \"format\"");
  auto parsed_format = parse_dataset_format(*format);
  if (!parsed_format)
    throw Error(cfg.origin() + ": unknown format \"" + *format +
                "\" (expected ml-1m, ml-25m, yahoo or triples)");
  out.format = *parsed_format;

  if (cfg.has("scale_min") || cfg.has("scale_max") || cfg.has("scale_step")) {
    RatingScale s;
    auto lo = cfg.get_f64("scale_min"), hi = cfg.get_f64("scale_max"), st = cfg.get_f64("scale_step");
    if (!lo || !hi || !st)
      throw Error(cfg.origin() + ": scale_min/scale_max/scale_step must be given together");
    s.min_value = *lo;
    s.max_value = *hi;
    s.step = *st;
    s.validate();
    out.scale_override = s;
  }

  out.plan.n_samples = cfg.get_u64("samples").value_or(1);
  out.plan.m_min = static_cast<std::uint32_t>(cfg.get_u64("m_min").value_or(1));
  out.plan.m_max = static_cast<std::uint32_t>(cfg.get_u64("m_max").value_or(out.plan.m_min));
  out.plan.n_min = static_cast<std::uint32_t>(cfg.get_u64("n_min").value_or(1));
  out.plan.n_max = static_cast<std::uint32_t>(cfg.get_u64("n_max").value_or(out.plan.n_min));
  out.plan.min_ratings_per_row = static_cast<std::uint32_t>(cfg.get_u64("min_per_row").value_or(1));
  out.plan.min_ratings_per_col = static_cast<std::uint32_t>(cfg.get_u64("min_per_col").value_or(1));
  out.plan.master_seed = cfg.get_u64("master_seed").value_or(0);

  out.test_fraction = cfg.get_f64("test_fraction").value_or(0.2);
  out.split_seed = cfg.get_u64("split_seed").value_or(0);
  out.clip = cfg.get_bool("clip").value_or(true);

  if (auto list = cfg.get_list("algorithms")) {
    for (const auto& name : *list) {
      auto id = parse_algorithm(name);
      if (!id) throw Error(cfg.origin() + ": unknown algorithm \"" + name + "\"");
      out.algorithms.push_back(*id);
    }
  } else {
    out.algorithms.assign(kAllAlgorithms.begin(), kAllAlgorithms.end());
  }
  if (out.algorithms.empty()) throw Error(cfg.origin() + ": at least one algorithm is required");

  if (auto base = cfg.get_string("log_base")) {
    const std::string t = str::lower(*base);
    if (t == "natural") out.log_base = LogBase::natural;
    else if (t == "base10") out.log_base = LogBase::base10;
    else throw Error(cfg.origin() + ": log_base must be natural or base10");
  }

  out.out_dir = cfg.get_string("out_dir").value_or(".");
  out.records_file = cfg.get_string("records").value_or("records.jsonl");
  out.workers = static_cast<unsigned>(cfg.get_u64("workers").value_or(1));
  if (out.workers < 1) out.workers = 1;

  for (AlgorithmId id : kAllAlgorithms) {
    Hyperparams p = default_hyperparams(id);
    for (const char* key : detail::kHyperparamKeys) {
      const std::string full = std::string(algorithm_name(id)) + "." + key;
      if (cfg.has(full)) detail::apply_hyperparam_override(p, key, cfg, full);
    }
    out.hyperparams[id] = p;
  }

  cfg.reject_unused();
  return out;
}

inline ExperimentConfig load_experiment_config(const std::string& path) {
  KeyValueConfig cfg = KeyValueConfig::from_file(path);
  return parse_experiment_config(cfg);
}

// Hash of the determinism-relevant configuration (output paths and worker
// count excluded: they cannot change the record set).
inline std::string config_hash(const ExperimentConfig& c) {
  std::string s;
  s += "dataset=" + c.dataset_path + "\n";
  s += std::string("format=") + dataset_format_name(c.format) + "\n";
  if (c.scale_override)
    s += "scale=" + str::format_double(c.scale_override->min_value) + "," +
         str::format_double(c.scale_override->max_value) + "," +
         str::format_double(c.scale_override->step) + "\n";
  s += "samples=" + std::to_string(c.plan.n_samples) + "\n";
  s += "m=" + std::to_string(c.plan.m_min) + ".." + std::to_string(c.plan.m_max) + "\n";
  s += "n=" + std::to_string(c.plan.n_min) + ".." + std::to_string(c.plan.n_max) + "\n";
  s += "min=" + std::to_string(c.plan.min_ratings_per_row) + "," +
       std::to_string(c.plan.min_ratings_per_col) + "\n";
  s += "master_seed=" + std::to_string(c.plan.master_seed) + "\n";
  s += "test_fraction=" + str::format_double(c.test_fraction) + "\n";
  s += "split_seed=" + std::to_string(c.split_seed) + "\n";
  s += std::string("clip=") + (c.clip ? "1" : "0") + "\n";
  for (AlgorithmId id : c.algorithms) {
    const Hyperparams& p = c.hyperparams.at(id);
    s += std::string(algorithm_name(id)) + "=" + std::to_string(p.n_factors) + "," +
         std::to_string(p.n_epochs) + "," + str::format_double(p.learning_rate) + "," +
         str::format_double(p.regularization) + "," + str::format_double(p.init_std) + "," +
         str::format_double(p.init_low) + "," + str::format_double(p.init_high) + "," +
         std::to_string(p.k) + "," + std::to_string(p.min_k) + "," +
         similarity_name(p.similarity) + "," + (p.user_based ? "u" : "i") + "," +
         std::to_string(p.n_user_clusters) + "," + std::to_string(p.n_item_clusters) + "\n";
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(s)));
  return buf;
}

struct ExperimentRecord {
  std::uint64_t sample_index = 0;
  std::uint64_t sample_seed = 0;
  RdcProfile profile;
  AlgorithmId algorithm = AlgorithmId::svd;
  EvalResult eval;
};

inline std::uint64_t derived_split_seed(const ExperimentConfig& cfg, std::uint64_t sample_index) {
  return mix_seed(cfg.split_seed, sample_index);
}

inline std::uint64_t derived_fit_seed(std::uint64_t sample_seed, AlgorithmId id) {
  return mix_seed(sample_seed, kFitSeedTagBase + algorithm_ordinal(id));
}

// Every seed a run derives, for --seed-report.
struct SeedReportRow {
  std::uint64_t sample_index = 0;
  std::uint64_t sample_seed = 0;
  std::uint64_t split_seed = 0;
  std::vector<std::pair<AlgorithmId, std::uint64_t>> fit_seeds;
};

inline std::vector<SeedReportRow> seed_schedule(const ExperimentConfig& cfg,
                                                std::span<const SampledUrm> batch) {
  std::vector<SeedReportRow> rows;
  rows.reserve(batch.size());
  for (std::uint64_t k = 0; k < batch.size(); ++k) {
    SeedReportRow row;
    row.sample_index = k;
    row.sample_seed = batch[k].sample_seed;
    row.split_seed = derived_split_seed(cfg, k);
    for (AlgorithmId id : cfg.algorithms)
      row.fit_seeds.push_back({id, derived_fit_seed(batch[k].sample_seed, id)});
    rows.push_back(std::move(row));
  }
  return rows;
}

inline nlohmann::json record_to_json(const ExperimentRecord& r) {
  nlohmann::json j;
  j["sample_index"] = r.sample_index;
  j["sample_seed"] = r.sample_seed;
  j["m"] = r.profile.m;
  j["n"] = r.profile.n;
  j["n_ratings"] = r.profile.n_ratings;
  j["ipu"] = r.profile.ipu;
  j["ipi"] = r.profile.ipi;
  j["density"] = r.profile.density;
  j["algorithm"] = algorithm_name(r.algorithm);
  j["rmse"] = r.eval.rmse;
  if (r.eval.performance)
    j["performance"] = *r.eval.performance;
  else
    j["performance"] = nullptr;
  j["n_train"] = r.eval.n_train;
  j["n_test"] = r.eval.n_test;
  j["fit_seconds"] = r.eval.fit_seconds;
  return j;
}

inline ExperimentRecord record_from_json(const nlohmann::json& j) {
  ExperimentRecord r;
  r.sample_index = j.at("sample_index").get<std::uint64_t>();
  r.sample_seed = j.at("sample_seed").get<std::uint64_t>();
  r.profile.m = j.at("m").get<std::uint32_t>();
  r.profile.n = j.at("n").get<std::uint32_t>();
  r.profile.n_ratings = j.at("n_ratings").get<std::uint64_t>();
  r.profile.ipu = j.at("ipu").get<double>();
  r.profile.ipi = j.at("ipi").get<double>();
  r.profile.density = j.at("density").get<double>();
  auto algo = parse_algorithm(j.at("algorithm").get<std::string>());
  if (!algo) throw Error("record: unknown algorithm");
  r.algorithm = *algo;
  r.eval.algorithm = *algo;
  r.eval.rmse = j.at("rmse").get<double>();
  if (j.at("performance").is_null())
    r.eval.performance = std::nullopt;
  else
    r.eval.performance = j.at("performance").get<double>();
  r.eval.n_train = j.at("n_train").get<std::uint64_t>();
  r.eval.n_test = j.at("n_test").get<std::uint64_t>();
  r.eval.fit_seconds = j.at("fit_seconds").get<double>();
  return r;
}

// Canonical form for comparisons and resume detection: sorted keys, the
// wall-clock fit_seconds dropped.
inline std::string canonical_record_line(const nlohmann::json& record) {
  nlohmann::json j = record;
  j.erase("fit_seconds");
  return j.dump();
}

struct RecordsFile {
  nlohmann::json header;
  std::vector<ExperimentRecord> records;
};

inline RecordsFile load_records(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  RecordsFile out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view body = str::trim(line);
    if (body.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(body);
    } catch (const nlohmann::json::exception& e) {
      throw Error(path + ": line " + std::to_string(line_no) + ": bad JSON (" + e.what() + ")");
    }
    if (line_no == 1) {
      if (!j.contains("rdcbench_records"))
        throw Error(path + ": line 1: not a records file (missing header)");
      out.header = j;
      continue;
    }
    out.records.push_back(record_from_json(j));
  }
  if (out.header.is_null()) throw Error(path + ": empty records file");
  return out;
}

struct RunCallbacks {
  std::function<void(const ExperimentRecord&)> on_record;
  std::function<void(std::uint64_t attempt, std::uint64_t seed)> on_degenerate;
  std::function<void(std::uint64_t sample_index, AlgorithmId, const std::string&)> on_failure;
};

struct RunSummary {
  std::uint64_t computed = 0;
  std::uint64_t skipped = 0;   // already present in the record file
  std::uint64_t failed = 0;
};

inline RunSummary run(const ExperimentConfig& cfg, bool resume = false,
                      const RunCallbacks& cb = {}) {
  namespace fs = std::filesystem;
  const std::string hash = config_hash(cfg);
  const std::string path = cfg.records_path();

  std::set<std::pair<std::uint64_t, std::string>> done;
  bool fresh = true;
  if (fs::exists(path)) {
    if (!resume)
      throw Error(path + " already exists; pass resume to continue or remove it");
    RecordsFile existing = load_records(path);
    const std::string existing_hash = existing.header.value("config_hash", "");
    if (existing_hash != hash)
      throw Error(path + ": config hash mismatch (file " + existing_hash + ", config " + hash +
                  "); refusing to mix record sets");
    for (const ExperimentRecord& r : existing.records)
      done.insert({r.sample_index, algorithm_name(r.algorithm)});
    fresh = false;
  }

  // the dataset must load and sample before any output is touched
  LoadedDataset dataset = load_dataset(cfg.dataset_path, cfg.format, cfg.scale_override);
  std::vector<SampledUrm> batch =
      sample_batch(dataset.matrix, cfg.plan, [&](std::uint64_t attempt, std::uint64_t seed) {
        if (cb.on_degenerate) cb.on_degenerate(attempt, seed);
      });

  if (!cfg.out_dir.empty()) fs::create_directories(cfg.out_dir);
  std::ofstream out(path, std::ios::app);
  if (!out) throw Error("cannot write " + path);
  if (fresh) {
    nlohmann::json header;
    header["rdcbench_records"] = 1;
    header["version"] = version();
    header["config_hash"] = hash;
    out << header.dump() << "\n";
    out.flush();
  }

  struct Task {
    std::uint64_t sample_index;
    AlgorithmId algorithm;
  };
  std::vector<Task> tasks;
  RunSummary summary;
  for (std::uint64_t k = 0; k < batch.size(); ++k)
    for (AlgorithmId id : cfg.algorithms) {
      if (done.count({k, algorithm_name(id)})) {
        ++summary.skipped;
        continue;
      }
      tasks.push_back({k, id});
    }

  enum class SlotState { pending, ready, failed };
  struct Slot {
    SlotState state = SlotState::pending;
    std::optional<ExperimentRecord> record;
    std::string error;
  };
  std::vector<Slot> slots(tasks.size());

  std::mutex mu;
  std::condition_variable cv;
  std::atomic<std::size_t> next_task{0};

  auto worker = [&] {
    while (true) {
      const std::size_t t = next_task.fetch_add(1);
      if (t >= tasks.size()) return;
      const Task& task = tasks[t];
      const SampledUrm& sample = batch[task.sample_index];
      Slot result;
      try {
        Hyperparams params = cfg.hyperparams.at(task.algorithm);
        params.rng_seed = derived_fit_seed(sample.sample_seed, task.algorithm);
        SplitSpec split_spec{cfg.test_fraction, derived_split_seed(cfg, task.sample_index)};
        ExperimentRecord record;
        record.sample_index = task.sample_index;
        record.sample_seed = sample.sample_seed;
        record.profile = sample.profile;
        record.algorithm = task.algorithm;
        record.eval = evaluate(task.algorithm, params, sample.matrix, split_spec, cfg.clip);
        result.record = std::move(record);
        result.state = SlotState::ready;
      } catch (const std::exception& e) {
        result.state = SlotState::failed;
        result.error = e.what();
      }
      {
        std::lock_guard<std::mutex> lock(mu);
        slots[t] = std::move(result);
      }
      cv.notify_one();
    }
  };

  const unsigned n_workers = std::min<unsigned>(cfg.workers, std::max<std::size_t>(tasks.size(), 1));
  std::vector<std::thread> pool;
  pool.reserve(n_workers);
  for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(worker);

  // single writer, strict task order
  {
    std::unique_lock<std::mutex> lock(mu);
    for (std::size_t t = 0; t < tasks.size(); ++t) {
      cv.wait(lock, [&] { return slots[t].state != SlotState::pending; });
      if (slots[t].state == SlotState::ready) {
        out << record_to_json(*slots[t].record).dump() << "\n";
        out.flush();
        ++summary.computed;
        if (cb.on_record) {
          lock.unlock();
          cb.on_record(*slots[t].record);
          lock.lock();
        }
      } else {
        ++summary.failed;
        if (cb.on_failure) {
          lock.unlock();
          cb.on_failure(tasks[t].sample_index, tasks[t].algorithm, slots[t].error);
          lock.lock();
        }
      }
      slots[t].record.reset();  // keep peak memory flat
    }
  }
  for (std::thread& th : pool) th.join();
  if (!out) throw Error("write failed: " + path);
  return summary;
}

// ---------------------------------------------------------------------------
// analysis over persisted records

enum class HeldCharacteristic { ipu, ipi };

inline const char* held_name(HeldCharacteristic h) {
  return h == HeldCharacteristic::ipu ? "ipu" : "ipi";
}

struct ConstantSlice {
  HeldCharacteristic held = HeldCharacteristic::ipu;
  double center = 0.0;
  double tolerance = 0.0;
  std::vector<ExperimentRecord> members;  // sorted by the varying characteristic
};

inline ConstantSlice slice_constant(std::span<const ExperimentRecord> records,
                                    HeldCharacteristic held, double center, double tolerance) {
  if (tolerance < 0.0) throw std::invalid_argument("slice_constant: tolerance must be >= 0");
  if (!(center > 0.0)) throw std::invalid_argument("slice_constant: center must be > 0");
  ConstantSlice slice{held, center, tolerance, {}};
  for (const ExperimentRecord& r : records) {
    const double held_value = held == HeldCharacteristic::ipu ? r.profile.ipu : r.profile.ipi;
    if (std::abs(held_value - center) <= center * tolerance) slice.members.push_back(r);
  }
  std::sort(slice.members.begin(), slice.members.end(),
            [held](const ExperimentRecord& a, const ExperimentRecord& b) {
              const double va = held == HeldCharacteristic::ipu ? a.profile.ipi : a.profile.ipu;
              const double vb = held == HeldCharacteristic::ipu ? b.profile.ipi : b.profile.ipu;
              if (va != vb) return va < vb;
              if (a.sample_index != b.sample_index) return a.sample_index < b.sample_index;
              return a.algorithm < b.algorithm;
            });
  return slice;
}

// One regression per algorithm; algorithms with fewer than 5 usable records
// (or a degenerate design) are reported through the warning callback and
// omitted.
inline std::map<AlgorithmId, RegressionFit> fit_all(
    std::span<const ExperimentRecord> records, LogBase base,
    const std::function<void(AlgorithmId, const std::string&)>& warn = {}) {
  std::map<AlgorithmId, std::vector<std::pair<RdcProfile, double>>> grouped;
  for (const ExperimentRecord& r : records)
    if (r.eval.performance)  // perfect-fit markers are excluded
      grouped[r.algorithm].push_back({r.profile, *r.eval.performance});

  std::map<AlgorithmId, RegressionFit> out;
  for (auto& [id, rows] : grouped) {
    if (rows.size() < 5) {
      if (warn)
        warn(id, "only " + std::to_string(rows.size()) + " usable records (need 5); omitted");
      continue;
    }
    try {
      out[id] = ols_fit(build_design(rows, base), base);
    } catch (const std::exception& e) {
      if (warn) warn(id, e.what());
    }
  }
  return out;
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::uint64_t n = 0;
};

struct PlotData {
  HeldCharacteristic held = HeldCharacteristic::ipu;
  double center = 0.0;
  double tolerance = 0.0;
  AlgorithmId algorithm = AlgorithmId::svd;
  LogBase log_base = LogBase::natural;
  std::vector<std::pair<double, double>> points;  // (log of varying characteristic, performance)
  std::optional<LineFit> line;                    // absent for < 2 points or zero x-variance
};

inline PlotData emit_plot_data(const ConstantSlice& slice, AlgorithmId algorithm, LogBase base) {
  PlotData out;
  out.held = slice.held;
  out.center = slice.center;
  out.tolerance = slice.tolerance;
  out.algorithm = algorithm;
  out.log_base = base;
  for (const ExperimentRecord& r : slice.members) {
    if (r.algorithm != algorithm || !r.eval.performance) continue;
    const double varying =
        slice.held == HeldCharacteristic::ipu ? r.profile.ipi : r.profile.ipu;
    out.points.push_back({log_in(base, varying), *r.eval.performance});
  }
  if (out.points.size() >= 2) {
    const auto n = static_cast<double>(out.points.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (auto [x, y] : out.points) {
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      syy += y * y;
    }
    const double varx = sxx - sx * sx / n;
    const double vary = syy - sy * sy / n;
    if (varx > 0.0) {
      LineFit line;
      line.slope = (sxy - sx * sy / n) / varx;
      line.intercept = (sy - line.slope * sx) / n;
      line.n = out.points.size();
      if (vary > 0.0) {
        double rss = 0.0;
        for (auto [x, y] : out.points) {
          const double res = y - (line.intercept + line.slope * x);
          rss += res * res;
        }
        line.r2 = std::min(1.0, std::max(0.0, 1.0 - rss / vary));
      } else {
        line.r2 = 1.0;  // constant response, exactly interpolated
      }
      out.line = line;
    }
  }
  return out;
}

inline void write_plot_csv(const PlotData& plot, const std::string& csv_path) {
  std::ofstream out(csv_path);
  if (!out) throw Error("cannot write " + csv_path);
  out << "x,performance\n";
  for (auto [x, y] : plot.points) out << str::format_double(x) << "," << str::format_double(y) << "\n";
  if (!out) throw Error("write failed: " + csv_path);

  nlohmann::json side;
  side["algorithm"] = algorithm_name(plot.algorithm);
  side["held"] = held_name(plot.held);
  side["center"] = plot.center;
  side["tolerance"] = plot.tolerance;
  side["log_base"] = log_base_name(plot.log_base);
  side["n_points"] = plot.points.size();
  if (plot.line) {
    side["line"] = {{"slope", plot.line->slope},
                    {"intercept", plot.line->intercept},
                    {"r2", plot.line->r2},
                    {"n", plot.line->n}};
  } else {
    side["line"] = nullptr;
  }
  const std::string side_path = csv_path + ".fit.json";
  std::ofstream sout(side_path);
  if (!sout) throw Error("cannot write " + side_path);
  sout << side.dump(2) << "\n";
}

}  // namespace rdc
