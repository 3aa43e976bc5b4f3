#pragma once

// Report rendering for the per-method regression fits: a plain-text table, a
// CSV with the same columns, and a JSON dump carrying the full diagnostics.
// Column layout: method, coefficient of log(IpU), coefficient of log(IpI),
// coefficient of the interaction, constant, adjusted R^2.

#include <cstdio>
#include <map>
#include <string>

#include <json.hpp>

#include "rdcbench/cf/hyperparams.hpp"
#include "rdcbench/regression.hpp"

namespace rdc {

// Row order used by the reports.
inline constexpr std::array<AlgorithmId, 7> kReportOrder = {
    AlgorithmId::unn,       AlgorithmId::inn,       AlgorithmId::svd, AlgorithmId::svd_b,
    AlgorithmId::co_clustering, AlgorithmId::slope_one, AlgorithmId::nmf,
};

namespace detail {

inline std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace detail

inline std::string render_table_text(const std::map<AlgorithmId, RegressionFit>& fits,
                                     LogBase base) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof line, "%-14s %14s %14s %22s %10s %16s\n", "CF Method",
                "coef log(IpU)", "coef log(IpI)", "coef log(IpU)*log(IpI)", "constant",
                "R^2 (Adjusted)");
  out += line;
  out += std::string(94, '-') + "\n";
  bool flagged = false;
  for (AlgorithmId id : kReportOrder) {
    auto it = fits.find(id);
    if (it == fits.end()) continue;
    const RegressionFit& f = it->second;
    auto cell = [&](std::size_t j) {
      std::string s = detail::fixed(f.coef[j], 4);
      if (f.p_value[j] >= 0.01) {
        s += "*";
        flagged = true;
      }
      return s;
    };
    std::snprintf(line, sizeof line, "%-14s %14s %14s %22s %10s %16s\n",
                  algorithm_display_name(id), cell(1).c_str(), cell(2).c_str(), cell(3).c_str(),
                  cell(0).c_str(), detail::fixed(f.adjusted_r2, 2).c_str());
    out += line;
  }
  std::uint64_t n_min = UINT64_MAX, n_max = 0;
  for (const auto& entry : fits) {
    n_min = std::min(n_min, entry.second.n_points);
    n_max = std::max(n_max, entry.second.n_points);
  }
  out += "\n";
  out += "log base: " + std::string(log_base_name(base));
  if (!fits.empty()) {
    out += "; records per method: " + std::to_string(n_min);
    if (n_max != n_min) out += ".." + std::to_string(n_max);
  }
  out += "\n";
  if (flagged) out += "* p-value >= 0.01\n";
  return out;
}

inline std::string render_table_csv(const std::map<AlgorithmId, RegressionFit>& fits) {
  std::string out = "method,coef_log_ipu,coef_log_ipi,coef_interaction,constant,adjusted_r2\n";
  for (AlgorithmId id : kReportOrder) {
    auto it = fits.find(id);
    if (it == fits.end()) continue;
    const RegressionFit& f = it->second;
    out += std::string(algorithm_display_name(id)) + "," + str::format_double(f.coef[1]) + "," +
           str::format_double(f.coef[2]) + "," + str::format_double(f.coef[3]) + "," +
           str::format_double(f.coef[0]) + "," + str::format_double(f.adjusted_r2) + "\n";
  }
  return out;
}

inline nlohmann::json fits_to_json(const std::map<AlgorithmId, RegressionFit>& fits) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [id, f] : fits) {
    nlohmann::json j;
    j["constant"] = f.coef[0];
    j["coef_log_ipu"] = f.coef[1];
    j["coef_log_ipi"] = f.coef[2];
    j["coef_interaction"] = f.coef[3];
    j["std_error"] = f.std_error;
    j["t_stat"] = f.t_stat;
    j["p_value"] = f.p_value;
    j["r2"] = f.r2;
    j["adjusted_r2"] = f.adjusted_r2;
    j["n_points"] = f.n_points;
    j["log_base"] = log_base_name(f.log_base);
    out[algorithm_name(id)] = j;
  }
  return out;
}

}  // namespace rdc
