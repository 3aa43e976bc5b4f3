#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <fstream>

#include "rdcbench/experiment.hpp"
#include "rdcbench/io.hpp"
#include "support/fuzz.hpp"
#include "support/temp_dir.hpp"

using rdc::AlgorithmId;
using rdc::ExperimentConfig;
using rdc::ExperimentRecord;
using rdc::HeldCharacteristic;
using rdc::LogBase;

namespace {

// sorted canonical record lines (header dropped, fit_seconds masked)
std::vector<std::string> canonical_lines(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::vector<std::string> out;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first) {
      first = false;
      continue;
    }
    out.push_back(rdc::canonical_record_line(nlohmann::json::parse(line)));
  }
  std::sort(out.begin(), out.end());
  return out;
}

ExperimentConfig tiny_config(const TempDir& dir, const std::string& out_name,
                             unsigned workers = 1) {
  // parent dataset written once per temp dir
  const std::string parent_path = dir.file("parent.triples");
  if (!std::filesystem::exists(parent_path)) {
    rdc::Xoshiro256ss rng(424242);
    rdc::RatingMatrix parent = fuzz::random_matrix(rng, 40, 40, 0.3);
    rdc::save_triples(parent, parent_path);
  }

  auto kv = rdc::KeyValueConfig::parse(
      "dataset = " + parent_path + "\n" +
      "format = triples\n"
      "samples = 3\n"
      "m_min = 15\nm_max = 20\nn_min = 15\nn_max = 20\n"
      "master_seed = 11\n"
      "test_fraction = 0.25\n"
      "split_seed = 3\n"
      "algorithms = slope_one,unn,svd\n"
      "svd.n_factors = 4\n"
      "svd.n_epochs = 3\n"
      "out_dir = " + dir.file(out_name) + "\n" +
      "workers = " + std::to_string(workers) + "\n");
  return rdc::parse_experiment_config(kv);
}

}  // namespace

TEST_CASE("run writes one record per (sample, algorithm) pair plus a header") {
  TempDir dir;
  auto cfg = tiny_config(dir, "out");
  auto summary = rdc::run(cfg);
  REQUIRE(summary.computed == 9);  // 3 samples x 3 algorithms
  REQUIRE(summary.skipped == 0);
  REQUIRE(summary.failed == 0);

  std::ifstream in(cfg.records_path());
  std::string line;
  std::size_t lines = 0;
  while (std::getline(in, line))
    if (!line.empty()) ++lines;
  REQUIRE(lines == 10);

  auto loaded = rdc::load_records(cfg.records_path());
  REQUIRE(loaded.records.size() == 9);
  REQUIRE(loaded.header["config_hash"] == rdc::config_hash(cfg));
  for (const ExperimentRecord& r : loaded.records) {
    const double nr = static_cast<double>(r.profile.n_ratings);
    REQUIRE(std::abs(r.profile.ipu * r.profile.m - nr) <= 1e-12 * nr);
    REQUIRE(std::abs(r.profile.ipi * r.profile.n - nr) <= 1e-12 * nr);
    REQUIRE(r.eval.n_test + r.eval.n_train == r.profile.n_ratings);
  }
}

TEST_CASE("worker count does not change the record set") {
  TempDir dir;
  auto cfg1 = tiny_config(dir, "out1", 1);
  auto cfg4 = tiny_config(dir, "out4", 4);
  rdc::run(cfg1);
  rdc::run(cfg4);
  REQUIRE(canonical_lines(cfg1.records_path()) == canonical_lines(cfg4.records_path()));
}

TEST_CASE("rerunning an identical config reproduces the file") {
  TempDir dir;
  auto a = tiny_config(dir, "outA");
  auto b = tiny_config(dir, "outB");
  rdc::run(a);
  rdc::run(b);
  REQUIRE(canonical_lines(a.records_path()) == canonical_lines(b.records_path()));
}

TEST_CASE("resume recomputes exactly the deleted record") {
  TempDir dir;
  auto cfg = tiny_config(dir, "out");
  rdc::run(cfg);
  auto full = canonical_lines(cfg.records_path());

  // drop the final record line
  std::ifstream in(cfg.records_path());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) lines.push_back(line);
  in.close();
  std::ofstream out(cfg.records_path(), std::ios::trunc);
  for (std::size_t i = 0; i + 1 < lines.size(); ++i) out << lines[i] << "\n";
  out.close();

  auto summary = rdc::run(cfg, true);
  REQUIRE(summary.computed == 1);
  REQUIRE(summary.skipped == 8);
  REQUIRE(canonical_lines(cfg.records_path()) == full);

  // resuming a complete run computes nothing
  auto summary2 = rdc::run(cfg, true);
  REQUIRE(summary2.computed == 0);
  REQUIRE(summary2.skipped == 9);
}

TEST_CASE("running onto an existing file without resume is refused") {
  TempDir dir;
  auto cfg = tiny_config(dir, "out");
  rdc::run(cfg);
  REQUIRE_THROWS_WITH(rdc::run(cfg), Catch::Matchers::ContainsSubstring("resume"));
}

TEST_CASE("resume refuses a config-hash mismatch") {
  TempDir dir;
  auto cfg = tiny_config(dir, "out");
  rdc::run(cfg);
  auto altered = cfg;
  altered.plan.master_seed += 1;
  REQUIRE_THROWS_WITH(rdc::run(altered, true),
                      Catch::Matchers::ContainsSubstring("config hash mismatch"));
}

TEST_CASE("slice_constant band arithmetic") {
  std::vector<ExperimentRecord> records;
  auto make = [](double ipu, double ipi) {
    ExperimentRecord r;
    r.profile.ipu = ipu;
    r.profile.ipi = ipi;
    r.profile.m = r.profile.n = 10;
    r.profile.n_ratings = 100;
    r.eval.performance = 1.0;
    return r;
  };
  records.push_back(make(57.0, 5.0));    // below the band
  records.push_back(make(57.379, 9.0));  // lower edge
  records.push_back(make(58.55, 2.0));   // center
  records.push_back(make(59.721, 7.0));  // upper edge
  records.push_back(make(59.9, 1.0));    // above the band

  auto slice = rdc::slice_constant(records, HeldCharacteristic::ipu, 58.55, 0.02);
  REQUIRE(slice.members.size() == 3);
  // sorted by the varying characteristic (ipi)
  REQUIRE(slice.members[0].profile.ipi == 2.0);
  REQUIRE(slice.members[1].profile.ipi == 7.0);
  REQUIRE(slice.members[2].profile.ipi == 9.0);

  auto exact = rdc::slice_constant(records, HeldCharacteristic::ipu, 58.55, 0.0);
  REQUIRE(exact.members.size() == 1);

  auto empty = rdc::slice_constant(records, HeldCharacteristic::ipu, 1000.0, 0.02);
  REQUIRE(empty.members.empty());

  REQUIRE_THROWS_AS(rdc::slice_constant(records, HeldCharacteristic::ipu, 58.55, -0.1),
                    std::invalid_argument);
}

TEST_CASE("fit_all recovers planted per-method models and warns on short groups") {
  std::vector<ExperimentRecord> records;
  rdc::Xoshiro256ss rng(99);
  // six algorithms with plenty of planted-exact records
  const double planted[4] = {0.9, 0.021, 0.013, 0.004};
  for (AlgorithmId id : rdc::kAllAlgorithms) {
    if (id == AlgorithmId::nmf) continue;  // nmf gets too few records below
    for (int i = 0; i < 30; ++i) {
      ExperimentRecord r;
      r.algorithm = id;
      r.profile.m = r.profile.n = 100;
      r.profile.n_ratings = 1000;
      r.profile.ipu = rng.uniform(5.0, 150.0);
      r.profile.ipi = rng.uniform(5.0, 150.0);
      r.profile.density = 0.1;
      const double x1 = std::log(r.profile.ipu), x2 = std::log(r.profile.ipi);
      r.eval.performance = planted[0] + planted[1] * x1 + planted[2] * x2 + planted[3] * x1 * x2;
      r.eval.rmse = 1.0 / *r.eval.performance;
      records.push_back(r);
    }
  }
  for (int i = 0; i < 4; ++i) {
    ExperimentRecord r;
    r.algorithm = AlgorithmId::nmf;
    r.profile.ipu = 10.0 + i;
    r.profile.ipi = 20.0 + i;
    r.eval.performance = 1.0;
    records.push_back(r);
  }

  std::vector<std::pair<AlgorithmId, std::string>> warnings;
  auto fits = rdc::fit_all(records, LogBase::natural,
                           [&](AlgorithmId id, const std::string& msg) {
                             warnings.push_back({id, msg});
                           });
  REQUIRE(fits.size() == 6);
  REQUIRE(warnings.size() == 1);
  REQUIRE(warnings[0].first == AlgorithmId::nmf);
  for (const auto& [id, fit] : fits) {
    for (int j = 0; j < 4; ++j) REQUIRE(std::abs(fit.coef[j] - planted[j]) < 1e-8);
    REQUIRE(std::abs(fit.r2 - 1.0) < 1e-10);
  }
}

TEST_CASE("plot data emission") {
  TempDir dir;
  std::vector<ExperimentRecord> records;
  // three exactly collinear points in (log ipi, performance)
  for (double ipi : {10.0, 20.0, 40.0}) {
    ExperimentRecord r;
    r.algorithm = AlgorithmId::svd;
    r.profile.ipu = 50.0;
    r.profile.ipi = ipi;
    r.eval.performance = 0.5 + 0.1 * std::log(ipi);
    records.push_back(r);
  }
  auto slice = rdc::slice_constant(records, HeldCharacteristic::ipu, 50.0, 0.02);
  auto plot = rdc::emit_plot_data(slice, AlgorithmId::svd, LogBase::natural);
  REQUIRE(plot.points.size() == 3);
  REQUIRE(plot.line.has_value());
  REQUIRE(plot.line->r2 == Catch::Approx(1.0).margin(1e-12));
  REQUIRE(plot.line->slope == Catch::Approx(0.1).margin(1e-12));

  const std::string csv = dir.file("plot.csv");
  rdc::write_plot_csv(plot, csv);

  // round-trip: the emitted file reloads to the same values
  std::ifstream in(csv);
  std::string line;
  REQUIRE(std::getline(in, line));
  REQUIRE(line == "x,performance");
  std::size_t idx = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = rdc::str::split(line, ",");
    REQUIRE(fields.size() == 2);
    REQUIRE(*rdc::str::parse_f64(fields[0]) == plot.points[idx].first);
    REQUIRE(*rdc::str::parse_f64(fields[1]) == plot.points[idx].second);
    ++idx;
  }
  REQUIRE(idx == 3);
  REQUIRE(std::filesystem::exists(csv + ".fit.json"));

  // single-point slice: points emitted, no line
  auto single = rdc::slice_constant({records.data(), 1}, HeldCharacteristic::ipu, 50.0, 0.02);
  auto plot1 = rdc::emit_plot_data(single, AlgorithmId::svd, LogBase::natural);
  REQUIRE(plot1.points.size() == 1);
  REQUIRE_FALSE(plot1.line.has_value());
}
