#pragma once

// Ordinary least squares for the two-characteristic performance model
//
//   P = a0 + a1*log(IpU) + a2*log(IpI) + a3*log(IpU)*log(IpI)
//
// solved by Householder QR (the log columns and the interaction column are
// near-collinear for narrow sampling ranges, so normal equations are
// avoided), with standard errors, two-sided t p-values, R^2 / adjusted R^2,
// the partial-derivative sensitivities and the square-matrix quadratic form.

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rdcbench/rating_matrix.hpp"
#include "rdcbench/stats.hpp"
#include "rdcbench/util.hpp"

namespace rdc {

enum class LogBase { natural, base10 };

inline double log_in(LogBase base, double x) {
  return base == LogBase::natural ? std::log(x) : std::log10(x);
}

// ln of the base itself; converts d/dx log_base(x) = 1 / (x * ln(base)).
inline double ln_of_base(LogBase base) {
  return base == LogBase::natural ? 1.0 : std::log(10.0);
}

inline const char* log_base_name(LogBase base) {
  return base == LogBase::natural ? "natural" : "base10";
}

struct DesignPoint {
  double log_ipu = 0.0;
  double log_ipi = 0.0;
  double interaction = 0.0;  // log_ipu * log_ipi
  double response = 0.0;     // performance
};

struct RegressionFit {
  // coefficient order: a0 (intercept), a1 log(IpU), a2 log(IpI), a3 interaction
  std::array<double, 4> coef{};
  std::array<double, 4> std_error{};
  std::array<double, 4> t_stat{};
  std::array<double, 4> p_value{};
  double r2 = 0.0;
  double adjusted_r2 = 0.0;
  std::uint64_t n_points = 0;
  LogBase log_base = LogBase::natural;
  double condition = 0.0;  // max|R_jj| / min|R_jj| of the QR factor
};

struct Sensitivity {
  double dp_dipu = 0.0;
  double dp_dipi = 0.0;
  double c1 = 0.0;  // dp_dipu = c1 / ipu
  double c2 = 0.0;  // dp_dipi = c2 / ipi
};

inline std::vector<DesignPoint> build_design(
    std::span<const std::pair<RdcProfile, double>> records, LogBase base) {
  if (records.empty()) throw Error("build_design: empty input");
  std::vector<DesignPoint> out;
  out.reserve(records.size());
  for (const auto& [profile, performance] : records) {
    if (!(profile.ipu > 0.0) || !(profile.ipi > 0.0))
      throw Error("build_design: non-positive ipu/ipi");
    if (!std::isfinite(performance)) throw Error("build_design: non-finite performance");
    DesignPoint p;
    p.log_ipu = log_in(base, profile.ipu);
    p.log_ipi = log_in(base, profile.ipi);
    p.interaction = p.log_ipu * p.log_ipi;
    p.response = performance;
    out.push_back(p);
  }
  return out;
}

namespace detail {

// In-place Householder QR of the n x p column-major matrix `a`, with the same
// reflections applied to y. Afterwards the upper p x p triangle of `a` is R
// and y[0..p) is the leading part of Q^T y.
inline void householder_qr(std::vector<double>& a, std::vector<double>& y, std::size_t n,
                           std::size_t p) {
  std::vector<double> v(n);
  for (std::size_t j = 0; j < p; ++j) {
    double* col = a.data() + j * n;
    double sigma = 0.0;
    for (std::size_t i = j; i < n; ++i) sigma += col[i] * col[i];
    sigma = std::sqrt(sigma);
    if (sigma == 0.0) continue;  // rank deficiency surfaces via the R diagonal
    const double alpha = col[j] >= 0.0 ? -sigma : sigma;
    double vnorm2 = 0.0;
    for (std::size_t i = j; i < n; ++i) v[i] = col[i];
    v[j] -= alpha;
    for (std::size_t i = j; i < n; ++i) vnorm2 += v[i] * v[i];
    if (vnorm2 == 0.0) continue;
    for (std::size_t c = j; c < p; ++c) {
      double* target = a.data() + c * n;
      double dot = 0.0;
      for (std::size_t i = j; i < n; ++i) dot += v[i] * target[i];
      const double f = 2.0 * dot / vnorm2;
      for (std::size_t i = j; i < n; ++i) target[i] -= f * v[i];
    }
    double dot = 0.0;
    for (std::size_t i = j; i < n; ++i) dot += v[i] * y[i];
    const double f = 2.0 * dot / vnorm2;
    for (std::size_t i = j; i < n; ++i) y[i] -= f * v[i];
    col[j] = alpha;
    for (std::size_t i = j + 1; i < n; ++i) col[i] = 0.0;
  }
}

}  // namespace detail

// Fixed evaluation order shared by fitting diagnostics and model evaluation.
inline double eval_design_point(const RegressionFit& fit, const DesignPoint& p) {
  return ((fit.coef[0] + fit.coef[1] * p.log_ipu) + fit.coef[2] * p.log_ipi) +
         fit.coef[3] * p.interaction;
}

inline RegressionFit ols_fit(std::span<const DesignPoint> points, LogBase base) {
  constexpr std::size_t kP = 4;
  const std::size_t n = points.size();
  if (n < kP + 1)
    throw std::invalid_argument("ols_fit: need at least 5 points (4 coefficients + 1 df)");

  std::vector<double> a(n * kP);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const DesignPoint& p = points[i];
    if (!std::isfinite(p.log_ipu) || !std::isfinite(p.log_ipi) || !std::isfinite(p.response))
      throw Error("ols_fit: non-finite design entry");
    a[0 * n + i] = 1.0;
    a[1 * n + i] = p.log_ipu;
    a[2 * n + i] = p.log_ipi;
    a[3 * n + i] = p.interaction;
    y[i] = p.response;
  }

  detail::householder_qr(a, y, n, kP);

  double max_diag = 0.0, min_diag = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < kP; ++j) {
    const double d = std::abs(a[j * n + j]);
    max_diag = std::max(max_diag, d);
    min_diag = std::min(min_diag, d);
  }
  const double condition = min_diag > 0.0 ? max_diag / min_diag
                                          : std::numeric_limits<double>::infinity();
  if (max_diag == 0.0 || min_diag <= 1e-12 * max_diag)
    throw Error("ols_fit: rank-deficient design (condition estimate " +
                str::format_double(condition) + ")");

  RegressionFit fit;
  fit.n_points = n;
  fit.log_base = base;
  fit.condition = condition;

  // back substitution for R beta = (Q^T y)[0..p)
  for (std::size_t jj = kP; jj-- > 0;) {
    double s = y[jj];
    for (std::size_t c = jj + 1; c < kP; ++c) s -= a[c * n + jj] * fit.coef[c];
    fit.coef[jj] = s / a[jj * n + jj];
  }

  // R^{-1} (upper triangular) column by column; diag((X^T X)^{-1}) is then
  // the row sums of squares of R^{-1}.
  std::array<double, kP * kP> rinv{};
  for (std::size_t c = 0; c < kP; ++c) {
    std::array<double, kP> col{};
    for (std::size_t jj = kP; jj-- > 0;) {
      double s = (jj == c) ? 1.0 : 0.0;
      for (std::size_t k = jj + 1; k < kP; ++k) s -= a[k * n + jj] * col[k];
      col[jj] = s / a[jj * n + jj];
    }
    for (std::size_t r = 0; r < kP; ++r) rinv[r * kP + c] = col[r];
  }

  double rss = 0.0;
  double ybar = 0.0;
  for (const DesignPoint& p : points) ybar += p.response;
  ybar /= static_cast<double>(n);
  double tss = 0.0;
  double max_abs_y = 0.0;
  for (const DesignPoint& p : points) {
    const double res = p.response - eval_design_point(fit, p);
    rss += res * res;
    const double dev = p.response - ybar;
    tss += dev * dev;
    max_abs_y = std::max(max_abs_y, std::abs(p.response));
  }

  const double df = static_cast<double>(n - kP);
  const double s2 = rss / df;
  for (std::size_t j = 0; j < kP; ++j) {
    double rowsq = 0.0;
    for (std::size_t c = 0; c < kP; ++c) rowsq += rinv[j * kP + c] * rinv[j * kP + c];
    fit.std_error[j] = std::sqrt(s2 * rowsq);
    if (fit.std_error[j] > 0.0) {
      fit.t_stat[j] = fit.coef[j] / fit.std_error[j];
      fit.p_value[j] = stats::student_t_p_two_sided(fit.t_stat[j], df);
    } else {
      // zero residual variance: any nonzero coefficient is exact
      fit.t_stat[j] = fit.coef[j] == 0.0 ? 0.0
                                         : std::numeric_limits<double>::infinity() *
                                               (fit.coef[j] > 0 ? 1.0 : -1.0);
      fit.p_value[j] = fit.coef[j] == 0.0 ? 1.0 : 0.0;
    }
  }

  // TSS == 0 convention: r2 = 1 when the model also has zero residual, else 0.
  const double floor_sq = 1e-14 * (1.0 + max_abs_y);
  const double tss_floor = floor_sq * floor_sq * static_cast<double>(n);
  if (tss <= tss_floor) {
    fit.r2 = rss <= tss_floor ? 1.0 : 0.0;
  } else {
    fit.r2 = 1.0 - rss / tss;
  }
  fit.r2 = std::min(1.0, std::max(0.0, fit.r2));
  fit.adjusted_r2 =
      1.0 - (1.0 - fit.r2) * (static_cast<double>(n) - 1.0) / (static_cast<double>(n) - 4.0);
  return fit;
}

// Model value at raw characteristics (logs recomputed in the fit's base).
inline double model_value(const RegressionFit& fit, double ipu, double ipi) {
  if (!(ipu > 0.0) || !(ipi > 0.0)) throw std::invalid_argument("model_value: inputs must be > 0");
  DesignPoint p;
  p.log_ipu = log_in(fit.log_base, ipu);
  p.log_ipi = log_in(fit.log_base, ipi);
  p.interaction = p.log_ipu * p.log_ipi;
  return eval_design_point(fit, p);
}

// Partial derivatives of the fitted model. dP/dIpU = c1/IpU with
// c1 = (a1 + a3*log(IpI)) / ln(base); under natural logs c1 is exactly
// a1 + a3*log(IpI).
inline Sensitivity sensitivity(const RegressionFit& fit, double ipu, double ipi) {
  if (!(ipu > 0.0) || !(ipi > 0.0)) throw std::invalid_argument("sensitivity: inputs must be > 0");
  const double lb = ln_of_base(fit.log_base);
  Sensitivity s;
  s.c1 = (fit.coef[1] + fit.coef[3] * log_in(fit.log_base, ipi)) / lb;
  s.c2 = (fit.coef[2] + fit.coef[3] * log_in(fit.log_base, ipu)) / lb;
  s.dp_dipu = s.c1 / ipu;
  s.dp_dipi = s.c2 / ipi;
  return s;
}

// Square-matrix curve: with IpU = IpI = ip the model collapses to a
// quadratic in log(ip).
inline double square_urm_curve(const RegressionFit& fit, double ip) {
  if (!(ip > 0.0)) throw std::invalid_argument("square_urm_curve: input must be > 0");
  const double lg = log_in(fit.log_base, ip);
  return fit.coef[0] + (fit.coef[1] + fit.coef[2]) * lg + fit.coef[3] * lg * lg;
}

}  // namespace rdc
