// Command-line front end: ingest datasets into the canonical triple format,
// run sampling+evaluation experiments, fit the per-method regressions, and
// emit constant-slice plot data.
//
// Exit codes: 0 success, 1 runtime/data error, 2 usage error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "rdcbench/experiment.hpp"
#include "rdcbench/io.hpp"
#include "rdcbench/report.hpp"
#include "rdcbench/version.hpp"

namespace {

struct GlobalFlags {
  bool quiet = false;
  bool seed_report = false;
};

void print_profile(std::ostream& out, const rdc::RdcProfile& p) {
  out << "m=" << p.m << " n=" << p.n << " n_ratings=" << p.n_ratings
      << " ipu=" << rdc::str::format_double(p.ipu) << " ipi=" << rdc::str::format_double(p.ipi)
      << " density=" << rdc::str::format_double(p.density) << "\n";
}

int cmd_ingest(const std::string& input, const std::string& format_name, const std::string& out,
               double scale_min, double scale_max, double scale_step, bool have_scale) {
  auto format = rdc::parse_dataset_format(format_name);
  if (!format) {
    std::cerr << "unknown --format " << format_name << " (expected ml-1m, ml-25m, yahoo, triples)\n";
    return 2;
  }
  std::optional<rdc::RatingScale> scale;
  if (have_scale) {
    scale = rdc::RatingScale{scale_min, scale_max, scale_step};
    scale->validate();
  }
  rdc::LoadedDataset ds = rdc::load_dataset(input, *format, scale);
  rdc::save_triples(ds.matrix, out);
  print_profile(std::cout, rdc::rdc_profile(ds.matrix));
  return 0;
}

int cmd_run(const std::string& config_path, bool resume, const GlobalFlags& flags) {
  rdc::ExperimentConfig cfg = rdc::load_experiment_config(config_path);

  if (flags.seed_report) {
    rdc::LoadedDataset ds = rdc::load_dataset(cfg.dataset_path, cfg.format, cfg.scale_override);
    auto batch = rdc::sample_batch(ds.matrix, cfg.plan);
    std::cout << "sample_index sample_seed split_seed";
    for (rdc::AlgorithmId id : cfg.algorithms) std::cout << " fit_seed." << rdc::algorithm_name(id);
    std::cout << "\n";
    for (const auto& row : rdc::seed_schedule(cfg, batch)) {
      std::cout << row.sample_index << " " << row.sample_seed << " " << row.split_seed;
      for (const auto& [id, seed] : row.fit_seeds) std::cout << " " << seed;
      std::cout << "\n";
    }
  }

  const std::uint64_t total = cfg.plan.n_samples * cfg.algorithms.size();
  std::uint64_t seen = 0;
  rdc::RunCallbacks cb;
  if (!flags.quiet) {
    cb.on_record = [&](const rdc::ExperimentRecord& r) {
      ++seen;
      std::cerr << "[" << seen << "/" << total << "] sample " << r.sample_index << " "
                << rdc::algorithm_name(r.algorithm) << " rmse="
                << rdc::str::format_double(r.eval.rmse) << " ("
                << rdc::str::format_double(r.eval.fit_seconds) << "s)\n";
    };
  }
  cb.on_degenerate = [&](std::uint64_t attempt, std::uint64_t seed) {
    std::cerr << "degenerate sample skipped (attempt " << attempt << ", seed " << seed << ")\n";
  };
  cb.on_failure = [&](std::uint64_t sample, rdc::AlgorithmId id, const std::string& err) {
    std::cerr << "record failed: sample " << sample << " " << rdc::algorithm_name(id) << ": "
              << err << "\n";
  };

  rdc::RunSummary summary = rdc::run(cfg, resume, cb);
  std::cout << summary.computed << " records computed, " << summary.skipped << " skipped, "
            << summary.failed << " failed; records at " << cfg.records_path() << "\n";
  return 0;
}

int cmd_fit(const std::string& records_path, const std::string& base_name,
            const std::string& out_prefix) {
  const rdc::LogBase base =
      rdc::str::lower(base_name) == "base10" ? rdc::LogBase::base10 : rdc::LogBase::natural;
  rdc::RecordsFile rf = rdc::load_records(records_path);
  auto fits = rdc::fit_all(rf.records, base, [](rdc::AlgorithmId id, const std::string& msg) {
    std::cerr << "warning: " << rdc::algorithm_name(id) << ": " << msg << "\n";
  });

  const std::string text = rdc::render_table_text(fits, base);
  std::cout << text;

  auto write = [](const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw rdc::Error("cannot write " + path);
    out << content;
  };
  write(out_prefix + ".txt", text);
  write(out_prefix + ".csv", rdc::render_table_csv(fits));
  write(out_prefix + ".json", rdc::fits_to_json(fits).dump(2) + "\n");
  return 0;
}

int cmd_plot_data(const std::string& records_path, const std::string& hold_name, double center,
                  double tolerance, const std::string& method_name, const std::string& out,
                  const std::string& base_name) {
  const rdc::HeldCharacteristic held = rdc::str::lower(hold_name) == "ipi"
                                           ? rdc::HeldCharacteristic::ipi
                                           : rdc::HeldCharacteristic::ipu;
  auto method = rdc::parse_algorithm(method_name);
  if (!method) {
    std::cerr << "unknown --method " << method_name << " (expected";
    for (rdc::AlgorithmId id : rdc::kAllAlgorithms) std::cerr << " " << rdc::algorithm_name(id);
    std::cerr << ")\n";
    return 2;
  }
  const rdc::LogBase base =
      rdc::str::lower(base_name) == "base10" ? rdc::LogBase::base10 : rdc::LogBase::natural;

  rdc::RecordsFile rf = rdc::load_records(records_path);
  rdc::ConstantSlice slice = rdc::slice_constant(rf.records, held, center, tolerance);
  if (slice.members.empty())
    std::cerr << "warning: empty slice (" << rdc::held_name(held) << " near "
              << rdc::str::format_double(center) << ", tolerance "
              << rdc::str::format_double(tolerance) << ")\n";
  rdc::PlotData plot = rdc::emit_plot_data(slice, *method, base);
  if (!plot.line && !plot.points.empty())
    std::cerr << "warning: too few points for a line fit (" << plot.points.size() << ")\n";
  rdc::write_plot_csv(plot, out);
  std::cout << plot.points.size() << " points written to " << out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rating-data-characteristics benchmark toolkit"};
  app.set_version_flag("--version", RDCBENCH_VERSION);
  app.require_subcommand(1);

  GlobalFlags flags;
  app.add_flag("--quiet", flags.quiet, "suppress per-record progress output");
  app.add_flag("--seed-report", flags.seed_report, "print all derived seeds before running");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "parse a dataset and write the canonical triple file");
  std::string in_input, in_format, in_out;
  double in_smin = 0, in_smax = 0, in_sstep = 0;
  ingest->add_option("--input", in_input, "dataset file")->required();
  ingest->add_option("--format", in_format, "ml-1m, ml-25m, yahoo or triples")->required();
  ingest->add_option("--out", in_out, "canonical triple file to write")->required();
  auto* smin = ingest->add_option("--scale-min", in_smin, "override scale minimum");
  auto* smax = ingest->add_option("--scale-max", in_smax, "override scale maximum");
  auto* sstep = ingest->add_option("--scale-step", in_sstep, "override scale step");
  smin->needs(smax, sstep);
  smax->needs(smin, sstep);
  sstep->needs(smin, smax);

  // run
  auto* runcmd = app.add_subcommand("run", "run the sampling + evaluation pipeline");
  std::string run_config;
  bool run_resume = false;
  runcmd->add_option("--config", run_config, "experiment config file")->required();
  runcmd->add_flag("--resume", run_resume, "continue an interrupted run");

  // fit
  auto* fitcmd = app.add_subcommand("fit", "fit the per-method performance regressions");
  std::string fit_records, fit_base = "natural", fit_out;
  fitcmd->add_option("--records", fit_records, "records file from `run`")->required();
  fitcmd->add_option("--log-base", fit_base, "natural or base10")
      ->check(CLI::IsMember({"natural", "base10"}));
  fitcmd->add_option("--out-table", fit_out, "output prefix (.txt, .csv, .json)")->required();

  // plot-data
  auto* plotcmd = app.add_subcommand("plot-data", "emit performance-vs-characteristic plot data");
  std::string plot_records, plot_hold, plot_method, plot_out, plot_base = "natural";
  double plot_center = 0, plot_tolerance = 0.02;
  plotcmd->add_option("--records", plot_records, "records file from `run`")->required();
  plotcmd->add_option("--hold", plot_hold, "characteristic held constant (ipu or ipi)")
      ->required()
      ->check(CLI::IsMember({"ipu", "ipi"}));
  plotcmd->add_option("--center", plot_center, "held-characteristic center value")->required();
  plotcmd->add_option("--tolerance", plot_tolerance, "relative band width (default 0.02)");
  plotcmd->add_option("--method", plot_method, "algorithm to plot")->required();
  plotcmd->add_option("--out", plot_out, "plot CSV path (sidecar <out>.fit.json)")->required();
  plotcmd->add_option("--log-base", plot_base, "natural or base10")
      ->check(CLI::IsMember({"natural", "base10"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(ingest))
      return cmd_ingest(in_input, in_format, in_out, in_smin, in_smax, in_sstep,
                        smin->count() > 0);
    if (app.got_subcommand(runcmd)) return cmd_run(run_config, run_resume, flags);
    if (app.got_subcommand(fitcmd)) return cmd_fit(fit_records, fit_base, fit_out);
    if (app.got_subcommand(plotcmd))
      return cmd_plot_data(plot_records, plot_hold, plot_center, plot_tolerance, plot_method,
                           plot_out, plot_base);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
